//! Run configuration: named presets and the flat `key = value` format.

use std::fmt;
use std::path::PathBuf;

use varspec::cutoff::SignConvention;
use varspec::engine::{Method, Objective};
use varspec::models::{AnharmonicBasis, C4vSector, Parity};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Anharmonic,
    X2y2,
    /// Numeric tower on the expanded `3d`-coordinate potential.
    Su2,
    /// Closed forms, one row per level at a single `d`.
    Su2Levels,
    /// Closed forms, one row per `d`.
    Su2Ground,
    Su2Excited,
    /// Lowest eigenvalues at the largest cut-off.
    Cutoff,
    /// Eigenvalue columns for every cut-off.
    CutoffScan,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Anharmonic => "anharmonic",
            Model::X2y2 => "x2y2",
            Model::Su2 => "su2",
            Model::Su2Levels => "su2-levels",
            Model::Su2Ground => "su2-ground",
            Model::Su2Excited => "su2-excited",
            Model::Cutoff => "cutoff",
            Model::CutoffScan => "cutoff-scan",
        }
    }

    fn parse(s: &str) -> Result<Self, ConfigError> {
        let all = [
            Model::Anharmonic,
            Model::X2y2,
            Model::Su2,
            Model::Su2Levels,
            Model::Su2Ground,
            Model::Su2Excited,
            Model::Cutoff,
            Model::CutoffScan,
        ];
        all.into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ConfigError::Value { key: "model".into(), value: s.into() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    Parity(Parity),
    C4v(C4vSector),
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sector::Parity(p) => write!(f, "{p}"),
            Sector::C4v(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

/// `auto` picks the convention whose ground level is closer to
/// `reference_e0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignChoice {
    Auto,
    Fixed(SignConvention),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub model: Model,
    pub sectors: Vec<Sector>,
    pub method: Method,
    pub objective: Objective,
    pub basis: AnharmonicBasis,
    /// Total rows; with several sectors they are merged by energy.
    pub levels: usize,
    pub grid_points: usize,
    pub refine_starts: usize,
    pub xtol: f64,
    pub ftol: f64,
    pub max_evals: usize,
    pub orth_tol: f64,
    pub quad_tol: f64,
    /// Extra multistart points per level (x2y2).
    pub seeds: Vec<Vec<[f64; 3]>>,
    pub d: Vec<usize>,
    pub rescaled: bool,
    pub n_list: Vec<usize>,
    pub k: usize,
    pub sign: SignChoice,
    pub reference_e0: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub budget_secs: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    UnknownPreset(String),
    UnknownKey { line: usize, key: String },
    Syntax { line: usize, text: String },
    Value { key: String, value: String },
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::UnknownPreset(p) => {
                write!(f, "unknown preset `{p}` (expected table1..table12 or figure1)")
            }
            ConfigError::UnknownKey { line, key } => write!(f, "line {line}: unknown key `{key}`"),
            ConfigError::Syntax { line, text } => write!(f, "line {line}: expected `key = value`, got `{text}`"),
            ConfigError::Value { key, value } => write!(f, "invalid value `{value}` for `{key}`"),
            ConfigError::Invalid(s) => write!(f, "{s}"),
        }
    }
}

impl std::error::Error for ConfigError {}

pub const PRESETS: [&str; 13] = [
    "table1", "table2", "table3", "table4", "table5", "table6", "table7", "table8", "table9", "table10", "table11",
    "table12", "figure1",
];

const TABULATED_D: [usize; 6] = [2, 3, 4, 10, 100, 300];

impl RunConfig {
    fn base(name: &str, model: Model) -> Self {
        RunConfig {
            name: name.to_string(),
            model,
            sectors: Vec::new(),
            method: Method::Method1,
            objective: Objective::ResidualNorm,
            basis: AnharmonicBasis::Gn,
            levels: 1,
            grid_points: 5,
            refine_starts: 3,
            xtol: 1e-6,
            ftol: 1e-10,
            max_evals: 2000,
            orth_tol: 1e-8,
            quad_tol: 1e-10,
            seeds: Vec::new(),
            d: vec![2],
            rescaled: false,
            n_list: vec![200],
            k: 5,
            sign: SignChoice::Fixed(SignConvention::AsWritten),
            reference_e0: 4.23,
            format: Format::Csv,
            out: None,
            budget_secs: 60,
        }
    }

    /// Checks the combination of model, sectors and basis.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |s: String| Err(ConfigError::Invalid(s));
        match self.model {
            Model::Anharmonic => {
                if self.sectors.is_empty() || self.sectors.iter().any(|s| !matches!(s, Sector::Parity(_))) {
                    return bad("anharmonic runs need sectors from {even, odd}".into());
                }
            }
            Model::X2y2 => {
                if self.sectors.len() != 1 {
                    return bad("x2y2 runs need exactly one sector".into());
                }
                match self.sectors[0] {
                    Sector::C4v(C4vSector::Eee | C4vSector::Eeo) => {}
                    other => return bad(format!("sector `{other}` has no ansatz; use EEE or EEO")),
                }
            }
            Model::Su2 | Model::Su2Levels => {
                if self.d.len() != 1 || self.d[0] < 2 {
                    return bad("su2 tower runs need a single d >= 2".into());
                }
                if self.model == Model::Su2Levels && self.levels > 2 {
                    return bad("closed forms exist for levels 0 and 1 only".into());
                }
            }
            Model::Su2Ground | Model::Su2Excited => {
                if self.d.is_empty() || self.d.iter().any(|&d| d < 2) {
                    return bad("d values must be >= 2".into());
                }
            }
            Model::Cutoff | Model::CutoffScan => {
                if self.n_list.is_empty() || self.n_list.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("n_list must be non-empty and strictly ascending".into());
                }
                if self.k == 0 || self.k > self.n_list[0] + 1 {
                    return bad(format!("k = {} must lie in 1..={}", self.k, self.n_list[0] + 1));
                }
            }
        }
        if self.levels == 0 {
            return bad("levels must be at least 1".into());
        }
        Ok(())
    }

    /// `key = value` lines that reproduce this configuration.
    pub fn to_kv(&self) -> Vec<(String, String)> {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut kv = vec![
            ("name", self.name.clone()),
            ("model", self.model.name().to_string()),
            ("sectors", self.sectors.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")),
            ("method", self.method.to_string()),
            (
                "objective",
                match self.objective {
                    Objective::ResidualNorm => "residual",
                    Objective::RayleighForGroundState => "rayleigh_ground",
                }
                .to_string(),
            ),
            ("basis", self.basis.to_string()),
            ("levels", self.levels.to_string()),
            ("grid_points", self.grid_points.to_string()),
            ("refine_starts", self.refine_starts.to_string()),
            ("xtol", self.xtol.to_string()),
            ("ftol", self.ftol.to_string()),
            ("max_evals", self.max_evals.to_string()),
            ("orth_tol", self.orth_tol.to_string()),
            ("quad_tol", self.quad_tol.to_string()),
            ("d", join(&self.d)),
            ("rescaled", self.rescaled.to_string()),
            ("n_list", join(&self.n_list)),
            ("k", self.k.to_string()),
            (
                "sign",
                match self.sign {
                    SignChoice::Auto => "auto".to_string(),
                    SignChoice::Fixed(s) => s.to_string(),
                },
            ),
            ("reference_e0", self.reference_e0.to_string()),
            (
                "format",
                match self.format {
                    Format::Csv => "csv",
                    Format::Markdown => "markdown",
                }
                .to_string(),
            ),
            ("budget_secs", self.budget_secs.to_string()),
        ];
        if !self.seeds.is_empty() {
            let s = self
                .seeds
                .iter()
                .map(|lvl| lvl.iter().map(|w| format!("{} {} {}", w[0], w[1], w[2])).collect::<Vec<_>>().join(";"))
                .collect::<Vec<_>>()
                .join(" | ");
            kv.push(("seeds", s));
        }
        kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Applies one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let err = || ConfigError::Value { key: key.into(), value: value.into() };
        let num = |v: &str| v.parse::<f64>().map_err(|_| err());
        let int = |v: &str| v.parse::<usize>().map_err(|_| err());
        let list = |v: &str| -> Result<Vec<usize>, ConfigError> {
            v.split(',').map(|s| s.trim().parse::<usize>().map_err(|_| err())).collect()
        };
        match key {
            "name" => self.name = value.to_string(),
            "model" => self.model = Model::parse(value)?,
            "sectors" | "sector" => {
                self.sectors = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(parse_sector)
                    .collect::<Result<_, _>>()?
            }
            "method" => {
                self.method = match value {
                    "method1" | "1" => Method::Method1,
                    "method2" | "2" => Method::Method2,
                    _ => return Err(err()),
                }
            }
            "objective" => {
                self.objective = match value {
                    "residual" => Objective::ResidualNorm,
                    "rayleigh_ground" => Objective::RayleighForGroundState,
                    _ => return Err(err()),
                }
            }
            "basis" => self.basis = value.parse().map_err(|_| err())?,
            "levels" => self.levels = int(value)?,
            "grid_points" => self.grid_points = int(value)?,
            "refine_starts" => self.refine_starts = int(value)?,
            "xtol" => self.xtol = num(value)?,
            "ftol" => self.ftol = num(value)?,
            "max_evals" => self.max_evals = int(value)?,
            "orth_tol" => self.orth_tol = num(value)?,
            "quad_tol" => self.quad_tol = num(value)?,
            "seeds" => self.seeds = parse_seeds(value).ok_or_else(err)?,
            "d" => self.d = list(value)?,
            "rescaled" => self.rescaled = value.parse().map_err(|_| err())?,
            "n_list" => self.n_list = parse_n_list(value).ok_or_else(err)?,
            "k" => self.k = int(value)?,
            "sign" => {
                self.sign = match value {
                    "auto" => SignChoice::Auto,
                    other => SignChoice::Fixed(other.parse().map_err(|_| err())?),
                }
            }
            "reference_e0" => self.reference_e0 = num(value)?,
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "markdown" | "md" => Format::Markdown,
                    _ => return Err(err()),
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "budget_secs" => self.budget_secs = value.parse().map_err(|_| err())?,
            _ => return Err(ConfigError::UnknownKey { line: 0, key: key.into() }),
        }
        Ok(())
    }
}

fn parse_sector(s: &str) -> Result<Sector, ConfigError> {
    if let Ok(p) = s.parse::<Parity>() {
        return Ok(Sector::Parity(p));
    }
    s.parse::<C4vSector>()
        .map(Sector::C4v)
        .map_err(|_| ConfigError::Invalid(format!("unknown sector `{s}`")))
}

/// `w1 w2 w3; … | …`: levels separated by `|`, points by `;`.
fn parse_seeds(v: &str) -> Option<Vec<Vec<[f64; 3]>>> {
    v.split('|')
        .map(|lvl| {
            lvl.split(';')
                .filter(|p| !p.trim().is_empty())
                .map(|p| {
                    let w: Vec<f64> = p.split_whitespace().map(|x| x.parse().ok()).collect::<Option<_>>()?;
                    (w.len() == 3).then(|| [w[0], w[1], w[2]])
                })
                .collect()
        })
        .collect()
}

/// Either a comma list or `start:step:end`.
fn parse_n_list(v: &str) -> Option<Vec<usize>> {
    if let Some((a, rest)) = v.split_once(':') {
        let (s, b) = rest.split_once(':')?;
        let (a, s, b): (usize, usize, usize) = (a.trim().parse().ok()?, s.trim().parse().ok()?, b.trim().parse().ok()?);
        if s == 0 || a > b {
            return None;
        }
        return Some((a..=b).step_by(s).collect());
    }
    v.split(',').map(|s| s.trim().parse().ok()).collect()
}

/// Parses a config file. A `preset` key, if present, must come first and
/// seeds every other key.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg: Option<RunConfig> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
        };
        let (k, v) = (k.trim(), v.trim());
        if k == "preset" {
            if cfg.is_some() {
                return Err(ConfigError::Invalid(format!("line {}: `preset` must be the first key", i + 1)));
            }
            cfg = Some(preset(v)?);
            continue;
        }
        let c = cfg.get_or_insert_with(|| RunConfig::base("custom", Model::Anharmonic));
        c.set(k, v).map_err(|e| match e {
            ConfigError::UnknownKey { key, .. } => ConfigError::UnknownKey { line: i + 1, key },
            other => other,
        })?;
    }
    let cfg = cfg.ok_or_else(|| ConfigError::Invalid("empty configuration".into()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// The configuration that regenerates one published table or figure.
pub fn preset(name: &str) -> Result<RunConfig, ConfigError> {
    let anh = |basis, method, levels, budget| {
        let mut c = RunConfig::base(name, Model::Anharmonic);
        c.sectors = vec![Sector::Parity(Parity::Even), Sector::Parity(Parity::Odd)];
        c.basis = basis;
        c.method = method;
        c.levels = levels;
        c.budget_secs = budget;
        c
    };
    let x2 = |sector, method| {
        let mut c = RunConfig::base(name, Model::X2y2);
        c.sectors = vec![Sector::C4v(sector)];
        c.method = method;
        c.levels = 3;
        c.budget_secs = 600;
        c
    };
    let cfg = match name {
        "table1" => anh(AnharmonicBasis::Gn, Method::Method1, 11, 60),
        "table2" => anh(AnharmonicBasis::Gn, Method::Method2, 11, 60),
        "table3" => anh(AnharmonicBasis::Gn2, Method::Method1, 6, 300),
        "table4" => anh(AnharmonicBasis::Gn2, Method::Method2, 10, 300),
        "table5" => {
            let mut c = x2(C4vSector::Eee, Method::Method1);
            // the shallow three-parameter landscape has a basin near ω₂ ≈ 0
            c.seeds = vec![
                vec![[0.264, 1e-8, 0.142]],
                vec![[0.943, 0.161, 0.080]],
                vec![[0.157, 0.736, 0.073]],
            ];
            c
        }
        "table6" => x2(C4vSector::Eee, Method::Method2),
        "table7" => x2(C4vSector::Eeo, Method::Method2),
        "table8" => {
            let mut c = RunConfig::base(name, Model::Su2);
            c.method = Method::Method2;
            c.levels = 2;
            c
        }
        "table9" => {
            let mut c = RunConfig::base(name, Model::Cutoff);
            c.budget_secs = 900;
            c.sign = SignChoice::Auto;
            c
        }
        "table10" => {
            let mut c = RunConfig::base(name, Model::Su2Levels);
            c.levels = 2;
            c
        }
        "table11" | "table12" => {
            let model = if name == "table11" { Model::Su2Ground } else { Model::Su2Excited };
            let mut c = RunConfig::base(name, model);
            c.d = TABULATED_D.to_vec();
            c.rescaled = true;
            c
        }
        "figure1" => {
            let mut c = RunConfig::base(name, Model::CutoffScan);
            c.n_list = (1..=20).map(|i| 10 * i).collect();
            c.budget_secs = 900;
            c.sign = SignChoice::Auto;
            c
        }
        other => return Err(ConfigError::UnknownPreset(other.to_string())),
    };
    Ok(cfg)
}
