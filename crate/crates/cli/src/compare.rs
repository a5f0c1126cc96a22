//! Cell-by-cell comparison of a result table against a reference table
//! under a per-column tolerance table.

use std::fmt;
use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use crate::table::RawTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Abs,
    Rel,
    /// Distance in units in the last place of `f64`.
    Ulp,
}

impl FromStr for Mode {
    type Err = CompareError;
    fn from_str(s: &str) -> Result<Self, CompareError> {
        match s {
            "abs" => Ok(Mode::Abs),
            "rel" => Ok(Mode::Rel),
            "ulp" => Ok(Mode::Ulp),
            other => Err(CompareError::Schema(format!("unknown tolerance mode `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Abs => "abs",
            Mode::Rel => "rel",
            Mode::Ulp => "ulp",
        })
    }
}

/// Inclusive range of integer row keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rows {
    All,
    Range(i64, i64),
}

impl Rows {
    pub fn contains(&self, key: &str) -> bool {
        match self {
            Rows::All => true,
            Rows::Range(a, b) => key.parse::<i64>().is_ok_and(|k| *a <= k && k <= *b),
        }
    }
}

impl FromStr for Rows {
    type Err = CompareError;
    fn from_str(s: &str) -> Result<Self, CompareError> {
        let bad = || CompareError::Schema(format!("bad row selection `{s}`"));
        if s == "all" || s.is_empty() {
            return Ok(Rows::All);
        }
        let (a, b) = s.split_once('-').unwrap_or((s, s));
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok(Rows::Range(a, b))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tolerance {
    pub column: String,
    pub mode: Mode,
    pub tol: f64,
    pub rows: Rows,
}

impl Tolerance {
    pub fn new(column: &str, mode: Mode, tol: f64) -> Self {
        Tolerance { column: column.into(), mode, tol, rows: Rows::All }
    }

    pub fn deviation(&self, result: f64, reference: f64) -> f64 {
        match self.mode {
            Mode::Abs => (result - reference).abs(),
            Mode::Rel => (result - reference).abs() / reference.abs(),
            Mode::Ulp => ulp_distance(result, reference) as f64,
        }
    }
}

/// Number of representable `f64` values between `a` and `b`.
pub fn ulp_distance(a: f64, b: f64) -> u64 {
    if a.is_nan() || b.is_nan() {
        return u64::MAX;
    }
    let key = |x: f64| {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    };
    key(a).abs_diff(key(b))
}

#[derive(Debug)]
pub enum CompareError {
    Io(String),
    Schema(String),
}

impl fmt::Display for CompareError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompareError::Io(s) => write!(f, "i/o: {s}"),
            CompareError::Schema(s) => write!(f, "schema: {s}"),
        }
    }
}

impl std::error::Error for CompareError {}

/// Reads `column,mode,tol,rows` records.
pub fn read_tolerances(path: &Path) -> Result<Vec<Tolerance>, CompareError> {
    let t = read_table(path)?;
    parse_tolerances(&t)
}

pub fn parse_tolerances(t: &RawTable) -> Result<Vec<Tolerance>, CompareError> {
    let col = |name: &str| {
        t.column(name)
            .ok_or_else(|| CompareError::Schema(format!("tolerance table lacks column `{name}`")))
    };
    let (c, m, v) = (col("column")?, col("mode")?, col("tol")?);
    let r = t.column("rows");
    t.rows
        .iter()
        .map(|row| {
            let tol: f64 = row[v]
                .parse()
                .map_err(|_| CompareError::Schema(format!("bad tolerance `{}`", row[v])))?;
            if tol.is_nan() || tol < 0.0 {
                return Err(CompareError::Schema(format!("negative tolerance {tol}")));
            }
            Ok(Tolerance {
                column: row[c].clone(),
                mode: row[m].parse()?,
                tol,
                rows: r.map_or(Ok(Rows::All), |r| row[r].parse())?,
            })
        })
        .collect()
}

pub fn read_table(path: &Path) -> Result<RawTable, CompareError> {
    let f = File::open(path).map_err(|e| CompareError::Io(format!("{}: {e}", path.display())))?;
    RawTable::read(f).map_err(|e| CompareError::Io(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellReport {
    pub key: String,
    pub column: String,
    pub result: f64,
    pub reference: f64,
    pub deviation: f64,
    pub tol: f64,
    pub mode: Mode,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub cells: Vec<CellReport>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellReport> {
        self.cells.iter().filter(|c| !c.pass)
    }

    /// Largest deviation relative to its tolerance.
    pub fn worst(&self) -> Option<&CellReport> {
        self.cells.iter().max_by(|a, b| ratio(a).total_cmp(&ratio(b)))
    }
}

fn ratio(c: &CellReport) -> f64 {
    if c.tol > 0.0 {
        c.deviation / c.tol
    } else if c.deviation == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "key,column,result,reference,deviation,mode,tol,status")?;
        for c in &self.cells {
            writeln!(
                f,
                "{},{},{},{},{:.3e},{},{},{}",
                c.key,
                c.column,
                c.result,
                c.reference,
                c.deviation,
                c.mode,
                c.tol,
                if c.pass { "ok" } else { "FAIL" }
            )?;
        }
        match self.worst() {
            Some(w) => writeln!(f, "max deviation: {:.3e} ({} at {}; {} tol {})", w.deviation, w.column, w.key, w.mode, w.tol)?,
            None => writeln!(f, "no cells compared")?,
        }
        write!(f, "{}", if self.pass() { "PASS" } else { "FAIL" })
    }
}

/// Rows are matched on the first column. Empty reference cells are skipped;
/// a missing column, a missing row or an unparsable number is a schema error.
pub fn compare(result: &RawTable, reference: &RawTable, tols: &[Tolerance]) -> Result<Report, CompareError> {
    let key_name = reference
        .headers
        .first()
        .ok_or_else(|| CompareError::Schema("reference table has no columns".into()))?;
    if result.headers.first() != Some(key_name) {
        return Err(CompareError::Schema(format!(
            "key column differs: result `{}`, reference `{key_name}`",
            result.headers.first().map_or("", String::as_str)
        )));
    }
    let mut cells = Vec::new();
    for tol in tols {
        let missing = |side: &str| CompareError::Schema(format!("{side} table lacks column `{}`", tol.column));
        let rc = result.column(&tol.column).ok_or_else(|| missing("result"))?;
        let fc = reference.column(&tol.column).ok_or_else(|| missing("reference"))?;
        for ref_row in &reference.rows {
            let key = &ref_row[0];
            if !tol.rows.contains(key) || ref_row[fc].is_empty() {
                continue;
            }
            let num = |s: &str, side: &str| {
                s.parse::<f64>()
                    .map_err(|_| CompareError::Schema(format!("{side} `{s}` at {key}/{} is not a number", tol.column)))
            };
            let reference_v = num(&ref_row[fc], "reference")?;
            let res_row = result
                .row(key)
                .ok_or_else(|| CompareError::Schema(format!("result has no row `{key}`")))?;
            let result_v = num(&res_row[rc], "result")?;
            let deviation = tol.deviation(result_v, reference_v);
            cells.push(CellReport {
                key: key.clone(),
                column: tol.column.clone(),
                result: result_v,
                reference: reference_v,
                deviation,
                tol: tol.tol,
                mode: tol.mode,
                pass: deviation <= tol.tol,
            });
        }
    }
    Ok(Report { cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(text: &str) -> RawTable {
        RawTable::read(text.as_bytes()).unwrap()
    }

    #[test]
    fn ulp_distance_counts_representables() {
        assert_eq!(ulp_distance(1.0, 1.0), 0);
        assert_eq!(ulp_distance(1.0, f64::from_bits(1.0f64.to_bits() + 3)), 3);
        assert_eq!(ulp_distance(-0.0, 0.0), 0);
        assert_eq!(ulp_distance(f64::MIN_POSITIVE, -f64::MIN_POSITIVE), 2 * f64::MIN_POSITIVE.to_bits());
    }

    #[test]
    fn rows_selection() {
        assert_eq!("all".parse::<Rows>().unwrap(), Rows::All);
        assert_eq!("2-5".parse::<Rows>().unwrap(), Rows::Range(2, 5));
        assert_eq!("3".parse::<Rows>().unwrap(), Rows::Range(3, 3));
        assert!("5-2".parse::<Rows>().is_err());
        assert!(Rows::Range(2, 5).contains("4") && !Rows::Range(2, 5).contains("6"));
    }

    #[test]
    fn identical_tables_pass_and_perturbed_fail() {
        let reference = table("n,E,source\n0,1.0,a\n1,2.0,b\n2,,c\n");
        let tols = vec![Tolerance::new("E", Mode::Abs, 1e-3)];
        let r = compare(&reference, &reference, &tols).unwrap();
        assert!(r.pass());
        assert_eq!(r.cells.len(), 2);
        let perturbed = table("n,E\n0,1.0\n1,2.01\n2,9\n");
        let r = compare(&perturbed, &reference, &tols).unwrap();
        assert!(!r.pass());
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.worst().unwrap().key, "1");
    }

    #[test]
    fn schema_errors() {
        let reference = table("n,E\n0,1.0\n");
        let tols = vec![Tolerance::new("R", Mode::Abs, 1e-3)];
        assert!(matches!(compare(&reference, &reference, &tols), Err(CompareError::Schema(_))));
        let short = table("n,E\n1,1.0\n");
        let tols = vec![Tolerance::new("E", Mode::Rel, 1e-3)];
        assert!(matches!(compare(&short, &reference, &tols), Err(CompareError::Schema(_))));
        let other_key = table("d,E\n0,1.0\n");
        assert!(matches!(compare(&other_key, &reference, &tols), Err(CompareError::Schema(_))));
    }

    #[test]
    fn tolerance_table_parse() {
        let t = table("column,mode,tol,rows\nE,abs,1e-3,0-3\nR,rel,0.05,all\n");
        let tols = parse_tolerances(&t).unwrap();
        assert_eq!(tols[0].rows, Rows::Range(0, 3));
        assert_eq!(tols[1].mode, Mode::Rel);
        let bad = table("column,mode,tol\nE,sq,1\n");
        assert!(parse_tolerances(&bad).is_err());
    }
}
