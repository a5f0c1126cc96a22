//! Executes a [`RunConfig`] and writes `<name>.csv` (or `.md`) plus a
//! `<name>.meta.txt` sidecar.

use std::fmt;
use std::fs;
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};
use std::time::Instant;

use varspec::cutoff::{self, CutoffError, SignConvention};
use varspec::engine::{solve_tower, AnsatzFamily, EngineError, FrozenSet, SolverConfig, SpectrumEstimate};
use varspec::models::{
    anharmonic_family, anharmonic_hamiltonian, su2_excited_closed_form, su2_family, su2_ground_closed_form,
    x2y2_family, x2y2_hamiltonian, ModelError,
};
use varspec::symcore::{expectations, HamiltonianSpec};

use crate::config::{ConfigError, Format, Model, RunConfig, Sector, SignChoice};
use crate::table::{Cell, ResultTable};

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Solver { context: String, source: EngineError },
    Model(ModelError),
    Cutoff(CutoffError),
    Io { path: PathBuf, source: io::Error },
    Csv(csv::Error),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "configuration: {e}"),
            RunError::Solver { context, source } => write!(f, "solver failed ({context}): {source}"),
            RunError::Model(e) => write!(f, "model: {e}"),
            RunError::Cutoff(e) => write!(f, "cut-off: {e}"),
            RunError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            RunError::Csv(e) => write!(f, "csv: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<ModelError> for RunError {
    fn from(e: ModelError) -> Self {
        RunError::Model(e)
    }
}

impl From<CutoffError> for RunError {
    fn from(e: CutoffError) -> Self {
        RunError::Cutoff(e)
    }
}

/// A finished run: the table and metadata beyond the config echo.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub table: ResultTable,
    pub meta: Vec<(String, String)>,
    pub wall_secs: f64,
}

fn solver_config(cfg: &RunConfig) -> SolverConfig<f64> {
    let mut s = SolverConfig::new(cfg.method);
    s.objective = cfg.objective;
    s.grid_points = cfg.grid_points;
    s.refine_starts = cfg.refine_starts;
    s.xtol = cfg.xtol;
    s.ftol = cfg.ftol;
    s.max_evals = cfg.max_evals;
    s.orth_tol = cfg.orth_tol;
    s.quad_tol = cfg.quad_tol;
    s
}

fn tower(
    levels: usize,
    h: &HamiltonianSpec<f64>,
    fam: &dyn AnsatzFamily<f64>,
    cfg: &RunConfig,
    context: String,
) -> Result<Vec<SpectrumEstimate<f64>>, RunError> {
    solve_tower(levels, h, fam, &solver_config(cfg)).map_err(|source| RunError::Solver { context, source })
}

fn omega_headers(k: usize) -> Vec<String> {
    if k == 1 {
        vec!["omega".into()]
    } else {
        (1..=k).map(|i| format!("omega{i}")).collect()
    }
}

fn run_anharmonic(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let h = anharmonic_hamiltonian::<f64>();
    let nsec = cfg.sectors.len();
    let mut all: Vec<(String, SpectrumEstimate<f64>)> = Vec::new();
    for (i, sector) in cfg.sectors.iter().enumerate() {
        let Sector::Parity(p) = *sector else { unreachable!("validated") };
        // rows are dealt round-robin over the sectors, then merged by energy
        let levels = (cfg.levels + nsec - 1 - i) / nsec;
        if levels == 0 {
            continue;
        }
        let fam = anharmonic_family(p, cfg.basis);
        for est in tower(levels, &h, &fam, cfg, format!("{p} sector"))? {
            all.push((p.to_string(), est));
        }
    }
    all.sort_by(|a, b| a.1.energy.total_cmp(&b.1.energy));
    let k = AnsatzFamily::<f64>::param_count(&anharmonic_family(varspec::models::Parity::Even, cfg.basis));
    let mut headers: Vec<String> = vec!["n".into(), "E".into(), "R".into()];
    headers.extend(omega_headers(k));
    headers.extend(["sector".into(), "level".into()]);
    let mut t = ResultTable::new(headers);
    for (n, (sector, e)) in all.iter().enumerate() {
        let mut row: Vec<Cell> = vec![n.into(), e.energy.into(), e.residual.into()];
        row.extend(e.omega.iter().map(|&w| Cell::Num(w)));
        row.extend([sector.as_str().into(), e.level.into()]);
        t.push(row);
    }
    Ok(RunOutput { table: t, meta: Vec::new(), wall_secs: 0.0 })
}

fn estimates_table(ests: &[SpectrumEstimate<f64>], k: usize, sector: Option<String>) -> ResultTable {
    let mut headers: Vec<String> = vec!["n".into(), "E".into(), "R".into()];
    headers.extend(omega_headers(k));
    if sector.is_some() {
        headers.push("sector".into());
    }
    let mut t = ResultTable::new(headers);
    for e in ests {
        let mut row: Vec<Cell> = vec![e.level.into(), e.energy.into(), e.residual.into()];
        row.extend(e.omega.iter().map(|&w| Cell::Num(w)));
        if let Some(s) = &sector {
            row.push(format!("{s}{}", e.level).into());
        }
        t.push(row);
    }
    t
}

fn run_x2y2(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let Sector::C4v(sector) = cfg.sectors[0] else { unreachable!("validated") };
    let fam = x2y2_family(sector)?.with_seeds(cfg.seeds.clone());
    let ests = tower(cfg.levels, &x2y2_hamiltonian(), &fam, cfg, format!("{sector} sector"))?;
    Ok(RunOutput { table: estimates_table(&ests, 3, Some(sector.to_string())), meta: Vec::new(), wall_secs: 0.0 })
}

fn run_su2(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let d = cfg.d[0];
    let (h, fam) = su2_family::<f64>(d)?;
    let h = if cfg.rescaled {
        varspec::models::su2_hamiltonian(d, true)
    } else {
        h
    };
    let ests = tower(cfg.levels, &h, &fam, cfg, format!("d = {d}"))?;
    Ok(RunOutput { table: estimates_table(&ests, 1, None), meta: Vec::new(), wall_secs: 0.0 })
}

fn rescale(d: usize, on: bool) -> f64 {
    if on {
        (d as f64).powf(-4.0 / 3.0)
    } else {
        1.0
    }
}

/// Closed-form ground and excited rows at one `d`; the excited residual
/// comes from symbolic integration of the orthogonalized state.
fn run_su2_levels(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let d = cfg.d[0];
    let s = rescale(d, cfg.rescaled);
    let g = su2_ground_closed_form::<f64>(d)?;
    let mut t = ResultTable::new(["n", "E", "R", "omega"]);
    t.push(vec![0usize.into(), (g.e0 * s).into(), (g.r0_sq.sqrt() * s).into(), g.omega_min.into()]);
    if cfg.levels > 1 {
        let ex = su2_excited_closed_form::<f64>(d)?;
        let (h, fam) = su2_family::<f64>(d)?;
        let ctx = |source| RunError::Solver { context: format!("d = {d}, level 1"), source };
        let psi0 = fam.basis(0, &[g.omega_min]).map_err(|e| ctx(e.into()))?;
        let frozen = FrozenSet::from_states(vec![psi0], None, cfg.quad_tol).map_err(ctx)?;
        let mut integ = frozen.integrator();
        let sc = solver_config(cfg);
        let o = varspec::engine::orthogonalize(1, &[ex.omega1_min], &fam, &frozen, &sc, &mut integ).map_err(ctx)?;
        let (_, r2) = expectations(&o.state, &h, &mut integ).map_err(|e| ctx(e.into()))?.variance();
        t.push(vec![1usize.into(), (ex.e1_unrescaled * s).into(), (r2.sqrt() * s).into(), ex.omega1_min.into()]);
    }
    Ok(RunOutput { table: t, meta: Vec::new(), wall_secs: 0.0 })
}

fn run_su2_ground(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let mut t = ResultTable::new(["d", "E0", "R0", "omega0"]);
    for &d in &cfg.d {
        let g = su2_ground_closed_form::<f64>(d)?;
        let s = rescale(d, cfg.rescaled);
        t.push(vec![d.into(), (g.e0 * s).into(), (g.r0_sq.sqrt() * s).into(), g.omega_min.into()]);
    }
    Ok(RunOutput { table: t, meta: Vec::new(), wall_secs: 0.0 })
}

fn run_su2_excited(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let mut t = ResultTable::new(["d", "E1", "omega1"]);
    for &d in &cfg.d {
        let e = su2_excited_closed_form::<f64>(d)?;
        t.push(vec![d.into(), (e.e1_unrescaled * rescale(d, cfg.rescaled)).into(), e.omega1_min.into()]);
    }
    Ok(RunOutput { table: t, meta: Vec::new(), wall_secs: 0.0 })
}

/// Resolves the sign convention, recording how in the metadata.
fn resolve_sign(cfg: &RunConfig, meta: &mut Vec<(String, String)>) -> Result<SignConvention, RunError> {
    let sign = match cfg.sign {
        SignChoice::Fixed(s) => s,
        SignChoice::Auto => {
            let n = *cfg.n_list.last().expect("validated");
            let sel = cutoff::select_sign_convention::<f64>(n, cfg.reference_e0)?;
            meta.push(("sign_selection.e0_as_written".into(), sel.e0_as_written.to_string()));
            meta.push(("sign_selection.e0_repulsive".into(), sel.e0_repulsive.to_string()));
            meta.push(("sign_selection.reference_e0".into(), cfg.reference_e0.to_string()));
            sel.chosen
        }
    };
    meta.push(("sign_convention".into(), sign.to_string()));
    Ok(sign)
}

fn run_cutoff(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let mut meta = Vec::new();
    let sign = resolve_sign(cfg, &mut meta)?;
    let n = *cfg.n_list.last().expect("validated");
    let m = cutoff::assemble::<f64>(n, sign)?;
    let vals = cutoff::lowest_eigenvalues(&m, cfg.k)?;
    meta.push(("cutoff_n".into(), n.to_string()));
    let mut t = ResultTable::new(["n", "E"]);
    for (i, v) in vals.into_iter().enumerate() {
        t.push(vec![i.into(), v.into()]);
    }
    Ok(RunOutput { table: t, meta, wall_secs: 0.0 })
}

fn run_cutoff_scan(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let mut meta = Vec::new();
    let sign = resolve_sign(cfg, &mut meta)?;
    let scan = cutoff::convergence_scan::<f64>(&cfg.n_list, cfg.k, sign)?;
    let mut headers = vec!["N".to_string()];
    headers.extend((0..cfg.k).map(|i| format!("E{i}")));
    let mut t = ResultTable::new(headers);
    for (n, vals) in &scan.rows {
        let mut row: Vec<Cell> = vec![(*n).into()];
        row.extend(vals.iter().map(|&v| Cell::Num(v)));
        t.push(row);
    }
    meta.push(("monotone".into(), "true".into()));
    Ok(RunOutput { table: t, meta, wall_secs: 0.0 })
}

/// Runs the configuration without touching the filesystem.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut out = match cfg.model {
        Model::Anharmonic => run_anharmonic(cfg),
        Model::X2y2 => run_x2y2(cfg),
        Model::Su2 => run_su2(cfg),
        Model::Su2Levels => run_su2_levels(cfg),
        Model::Su2Ground => run_su2_ground(cfg),
        Model::Su2Excited => run_su2_excited(cfg),
        Model::Cutoff => run_cutoff(cfg),
        Model::CutoffScan => run_cutoff_scan(cfg),
    }?;
    out.wall_secs = start.elapsed().as_secs_f64();
    Ok(out)
}

/// Paths written by [`write_outputs`].
#[derive(Clone, Debug, PartialEq)]
pub struct Written {
    pub table: PathBuf,
    pub meta: PathBuf,
}

pub fn write_outputs(cfg: &RunConfig, out: &RunOutput, dir: &Path) -> Result<Written, RunError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let ext = match cfg.format {
        Format::Csv => "csv",
        Format::Markdown => "md",
    };
    let table = dir.join(format!("{}.{ext}", cfg.name));
    let f = fs::File::create(&table).map_err(io_err(&table))?;
    match cfg.format {
        Format::Csv => out.table.write_csv(BufWriter::new(f)).map_err(RunError::Csv)?,
        Format::Markdown => out.table.write_markdown(BufWriter::new(f)).map_err(io_err(&table))?,
    }
    let meta = dir.join(format!("{}.meta.txt", cfg.name));
    let mut text = String::from("# configuration\n");
    for (k, v) in cfg.to_kv() {
        text.push_str(&format!("{k} = {v}\n"));
    }
    text.push_str("# result\n");
    for (k, v) in &out.meta {
        text.push_str(&format!("{k} = {v}\n"));
    }
    text.push_str(&format!("rows = {}\n", out.table.rows.len()));
    text.push_str(&format!("threads = {}\n", rayon::current_num_threads()));
    text.push_str(&format!("wall_time_secs = {:.3}\n", out.wall_secs));
    text.push_str(&format!("within_budget = {}\n", out.wall_secs <= cfg.budget_secs as f64));
    fs::write(&meta, text).map_err(io_err(&meta))?;
    Ok(Written { table, meta })
}
