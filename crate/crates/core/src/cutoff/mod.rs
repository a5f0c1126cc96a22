//! Cut-off diagonalization of the `N = d = 2` matrix model in its maximally
//! symmetric sector:
//!
//! `H = −r⁻⁵∂ᵣ(r⁵∂ᵣ) + σ·(16/r²)·Λ + (r⁴/8)(1 − cos θ)`
//!
//! with `Λ` the Legendre operator in `u = cos θ` and measure `r⁵ dr du`. The
//! basis `P̃ₗ(u)φₙ(r)` is flattened by the pairing function and truncated to
//! indices `0..=N`; by min–max the eigenvalues of every truncation bound
//! the true ones from above and decrease with `N`.

mod basis;

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::linalg::{symmetric_eigen, DenseMatrix, LinalgError};
use crate::quad::{gauss_laguerre, QuadError, QuadRule};
use crate::scalar::Real;

pub use basis::{laguerre_all, pairing, unpairing, AngularBasis, RadialBasis, RADIAL_ALPHA};

/// Sign in front of the angular term. Since `Λ P̃ₗ = −l(l+1) P̃ₗ`, the
/// operator as displayed yields `−16l(l+1)/r²`; the repulsive reading
/// yields `+16l(l+1)/r²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignConvention {
    AsWritten,
    Repulsive,
}

impl SignConvention {
    fn centrifugal<T: Real>(self) -> T {
        match self {
            SignConvention::AsWritten => -T::one(),
            SignConvention::Repulsive => T::one(),
        }
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignConvention::AsWritten => write!(f, "as_written"),
            SignConvention::Repulsive => write!(f, "repulsive"),
        }
    }
}

impl FromStr for SignConvention {
    type Err = CutoffError;
    fn from_str(s: &str) -> Result<Self, CutoffError> {
        match s {
            "as_written" | "as-written" => Ok(SignConvention::AsWritten),
            "repulsive" => Ok(SignConvention::Repulsive),
            other => Err(CutoffError::InvalidInput(format!("unknown sign convention `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CutoffError {
    InvalidInput(String),
    Quad(QuadError),
    Linalg(LinalgError),
    Asymmetric { max: f64 },
    Residual { index: usize, residual: f64 },
    NotMonotone { column: usize, n_prev: usize, n: usize, prev: f64, next: f64 },
}

impl fmt::Display for CutoffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutoffError::InvalidInput(s) => write!(f, "{s}"),
            CutoffError::Quad(e) => write!(f, "{e}"),
            CutoffError::Linalg(e) => write!(f, "{e}"),
            CutoffError::Asymmetric { max } => write!(f, "assembled matrix not symmetric: {max:e}"),
            CutoffError::Residual { index, residual } => {
                write!(f, "eigenpair {index} residual {residual:e} above 1e-8·‖M‖")
            }
            CutoffError::NotMonotone { column, n_prev, n, prev, next } => write!(
                f,
                "eigenvalue {column} increased from {prev} (N={n_prev}) to {next} (N={n}): assembly or sign convention is wrong"
            ),
        }
    }
}

impl std::error::Error for CutoffError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CutoffError::Quad(e) => Some(e),
            CutoffError::Linalg(e) => Some(e),
            _ => None,
        }
    }
}

impl From<QuadError> for CutoffError {
    fn from(e: QuadError) -> Self {
        CutoffError::Quad(e)
    }
}

impl From<LinalgError> for CutoffError {
    fn from(e: LinalgError) -> Self {
        CutoffError::Linalg(e)
    }
}

/// Radial integrals under `r⁵ dr` between `φₙ` and `φₙ'`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialIntegrals<T> {
    /// `∫ φₙφₙ' r⁵`
    pub overlap: T,
    /// `∫ φₙ'φₙ'' r⁵`, the radial kinetic term after integration by parts.
    pub kinetic: T,
    /// `∫ φₙφₙ' r³`
    pub inv_r2: T,
    /// `∫ φₙφₙ' r⁹`
    pub r4: T,
}

/// Gauss–Laguerre order exact for the `(n, n')` radial integrands: the
/// largest is `r⁹·Lₙ·Lₙ'`, degree `n+n'+9`.
pub fn radial_nodes(n: usize, n2: usize) -> usize {
    (n + n2 + 9 + 12).div_ceil(2) + 8
}

fn radial_integrals_with<T: Real>(n: usize, n2: usize, rule: &QuadRule<T>) -> RadialIntegrals<T> {
    let rb = RadialBasis::new(n.max(n2));
    let mut acc = [T::zero(); 4];
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        // the rule's weight e^{-r} absorbs both e^{-r/2} factors
        let (p, q) = rb.poly_values(x);
        let x3 = x * x * x;
        let x5 = x3 * x * x;
        let pp = p[n] * p[n2];
        acc[0] += w * pp * x5;
        acc[1] += w * q[n] * q[n2] * x5;
        acc[2] += w * pp * x3;
        acc[3] += w * pp * x5 * x * x * x * x;
    }
    RadialIntegrals {
        overlap: acc[0],
        kinetic: acc[1],
        inv_r2: acc[2],
        r4: acc[3],
    }
}

pub fn radial_integrals<T: Real>(n: usize, n2: usize) -> Result<RadialIntegrals<T>, CutoffError> {
    let rule = gauss_laguerre(radial_nodes(n, n2))?;
    Ok(radial_integrals_with(n, n2, &rule))
}

/// `⟨f_{l'n'}, H f_{ln}⟩` assembled from the radial integrals of the pair.
pub fn element_from<T: Real>(l: usize, l2: usize, rad: &RadialIntegrals<T>, sign: SignConvention) -> T {
    let mut v = T::lit(0.125) * rad.r4 * AngularBasis::one_minus_u::<T>(l, l2);
    if l == l2 {
        let ll = T::count(l * (l + 1));
        v += rad.kinetic + sign.centrifugal::<T>() * T::lit(16.0) * ll * rad.inv_r2;
    }
    v
}

pub fn matrix_element<T: Real>(
    l: usize,
    n: usize,
    l2: usize,
    n2: usize,
    sign: SignConvention,
) -> Result<T, CutoffError> {
    let rad = radial_integrals(n, n2)?;
    Ok(element_from(l, l2, &rad, sign))
}

/// `H⁽ᴺ⁾` with its index map `a → (l, n)`.
#[derive(Clone, Debug)]
pub struct CutoffMatrix<T> {
    n_cut: usize,
    sign: SignConvention,
    matrix: DenseMatrix<T>,
    index: Vec<(usize, usize)>,
}

impl<T: Real> CutoffMatrix<T> {
    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn sign(&self) -> SignConvention {
        self.sign
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn index(&self) -> &[(usize, usize)] {
        &self.index
    }

    pub fn get(&self, a: usize, b: usize) -> T {
        self.matrix.get(a, b)
    }

    /// `H⁽ᴺ'⁾` for `N' ≤ N`, the leading principal submatrix.
    pub fn principal(&self, n_cut: usize) -> Result<Self, CutoffError> {
        if n_cut > self.n_cut {
            return Err(CutoffError::InvalidInput(format!(
                "cut-off {n_cut} above assembled {}",
                self.n_cut
            )));
        }
        Ok(CutoffMatrix {
            n_cut,
            sign: self.sign,
            matrix: self.matrix.leading(n_cut + 1),
            index: self.index[..=n_cut].to_vec(),
        })
    }
}

/// Assembles `H⁽ᴺ⁾`. Radial integrals are shared between entries with the
/// same `(n, n')`; rows are filled in parallel.
pub fn assemble<T: Real>(n_cut: usize, sign: SignConvention) -> Result<CutoffMatrix<T>, CutoffError> {
    let size = n_cut + 1;
    let index: Vec<(usize, usize)> = (0..size).map(unpairing).collect();
    let max_n = index.iter().map(|&(_, n)| n).max().unwrap_or(0);
    let mut rules: HashMap<usize, QuadRule<T>> = HashMap::new();
    for n in 0..=max_n {
        for n2 in 0..=max_n {
            let m = radial_nodes(n, n2);
            if let std::collections::hash_map::Entry::Vacant(e) = rules.entry(m) {
                e.insert(gauss_laguerre(m)?);
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..=max_n).flat_map(|n| (0..=max_n).map(move |n2| (n, n2))).collect();
    let radial: Vec<RadialIntegrals<T>> = pairs
        .par_iter()
        .map(|&(n, n2)| radial_integrals_with(n, n2, &rules[&radial_nodes(n, n2)]))
        .collect();
    let rad = |n: usize, n2: usize| &radial[n * (max_n + 1) + n2];
    let rows: Vec<Vec<T>> = (0..size)
        .into_par_iter()
        .map(|a| {
            let (l, n) = index[a];
            (0..size)
                .map(|b| {
                    let (l2, n2) = index[b];
                    element_from(l, l2, rad(n, n2), sign)
                })
                .collect()
        })
        .collect();
    let matrix = DenseMatrix::from_row_major(size, rows.into_iter().flatten().collect())?;
    let asym = matrix.max_asymmetry();
    if !(asym < T::lit(1e-10)) {
        return Err(CutoffError::Asymmetric { max: asym.as_f64() });
    }
    Ok(CutoffMatrix {
        n_cut,
        sign,
        matrix,
        index,
    })
}

/// The `k` smallest eigenvalues, ascending, each with its eigenpair
/// residual checked against `1e-8·‖M‖`.
pub fn lowest_eigenvalues<T: Real>(m: &CutoffMatrix<T>, k: usize) -> Result<Vec<T>, CutoffError> {
    lowest_of(m.matrix(), k)
}

pub(crate) fn lowest_of<T: Real>(a: &DenseMatrix<T>, k: usize) -> Result<Vec<T>, CutoffError> {
    if k == 0 || k > a.n() {
        return Err(CutoffError::InvalidInput(format!("k = {k} outside 1..={}", a.n())));
    }
    let eig = symmetric_eigen(a, true)?;
    let norm = a.norm_inf();
    for i in 0..k {
        let v = eig.vector(i).expect("vectors requested");
        let mv = a.mul_vec(&v);
        let res = mv
            .iter()
            .zip(&v)
            .map(|(&x, &y)| (x - eig.values[i] * y).powi(2))
            .fold(T::zero(), |s, t| s + t)
            .sqrt();
        if !(res <= T::lit(1e-8) * norm) {
            return Err(CutoffError::Residual {
                index: i,
                residual: res.as_f64(),
            });
        }
    }
    Ok(eig.values[..k].to_vec())
}

/// Slack allowed for round-off in the monotonicity check.
pub const MONOTONE_SLACK: f64 = 1e-9;

/// Eigenvalue columns `E₀ … E_{k−1}` per cut-off.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable<T> {
    pub k: usize,
    pub sign: SignConvention,
    pub rows: Vec<(usize, Vec<T>)>,
}

impl<T: Real> ConvergenceTable<T> {
    /// Columns `N,E0,…,E{k−1}`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let header: Vec<String> = std::iter::once("N".to_string())
            .chain((0..self.k).map(|i| format!("E{i}")))
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for (n, vals) in &self.rows {
            let cells: Vec<String> = vals.iter().map(|v| format!("{}", v.as_f64())).collect();
            writeln!(w, "{n},{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn last(&self) -> Option<&(usize, Vec<T>)> {
        self.rows.last()
    }
}

/// Eigenvalues of `H⁽ᴺ⁾` for each `N` in `n_list` (strictly ascending),
/// failing if any column increases by more than [`MONOTONE_SLACK`].
pub fn convergence_scan<T: Real>(
    n_list: &[usize],
    k: usize,
    sign: SignConvention,
) -> Result<ConvergenceTable<T>, CutoffError> {
    let Some(&n_max) = n_list.last() else {
        return Err(CutoffError::InvalidInput("empty cut-off list".into()));
    };
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CutoffError::InvalidInput("cut-off list must be strictly ascending".into()));
    }
    let full = assemble::<T>(n_max, sign)?;
    let rows = n_list
        .par_iter()
        .map(|&n| Ok((n, lowest_of(&full.matrix.leading(n + 1), k)?)))
        .collect::<Result<Vec<_>, CutoffError>>()?;
    let table = ConvergenceTable { k, sign, rows };
    check_monotone(&table)?;
    Ok(table)
}

pub fn check_monotone<T: Real>(table: &ConvergenceTable<T>) -> Result<(), CutoffError> {
    for w in table.rows.windows(2) {
        let ((n0, a), (n1, b)) = (&w[0], &w[1]);
        for (c, (&x, &y)) in a.iter().zip(b).enumerate() {
            if y > x + T::lit(MONOTONE_SLACK) {
                return Err(CutoffError::NotMonotone {
                    column: c,
                    n_prev: *n0,
                    n: *n1,
                    prev: x.as_f64(),
                    next: y.as_f64(),
                });
            }
        }
    }
    Ok(())
}

/// Ground eigenvalue under both conventions and the one closer to a
/// reference value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignSelection<T> {
    pub chosen: SignConvention,
    pub e0_as_written: T,
    pub e0_repulsive: T,
}

pub fn select_sign_convention<T: Real>(n_cut: usize, reference: T) -> Result<SignSelection<T>, CutoffError> {
    let e0 = |s| -> Result<T, CutoffError> { Ok(lowest_eigenvalues(&assemble::<T>(n_cut, s)?, 1)?[0]) };
    let (a, r) = (e0(SignConvention::AsWritten)?, e0(SignConvention::Repulsive)?);
    let chosen = if (a - reference).abs() < (r - reference).abs() {
        SignConvention::AsWritten
    } else {
        SignConvention::Repulsive
    };
    Ok(SignSelection {
        chosen,
        e0_as_written: a,
        e0_repulsive: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_eigenvalues() {
        let a = DenseMatrix::from_row_major(2, vec![2.0f64, 1.0, 1.0, 2.0]).unwrap();
        let v = lowest_of(&a, 2).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_sorted() {
        let d = [3.0f64, -1.0, 7.0, 0.5];
        let a = DenseMatrix::from_fn(4, |i, j| if i == j { d[i] } else { 0.0 });
        assert_eq!(lowest_of(&a, 4).unwrap(), vec![-1.0, 0.5, 3.0, 7.0]);
    }

    #[test]
    fn single_entry_matrix() {
        let m = assemble::<f64>(0, SignConvention::Repulsive).unwrap();
        let e = matrix_element::<f64>(0, 0, 0, 0, SignConvention::Repulsive).unwrap();
        assert_eq!(m.get(0, 0), e);
    }

    #[test]
    fn angular_selection_rule() {
        for s in [SignConvention::AsWritten, SignConvention::Repulsive] {
            assert_eq!(matrix_element::<f64>(0, 1, 2, 3, s).unwrap(), 0.0);
        }
    }

    #[test]
    fn nested_truncations() {
        let big = assemble::<f64>(30, SignConvention::Repulsive).unwrap();
        let small = assemble::<f64>(12, SignConvention::Repulsive).unwrap();
        let sub = big.principal(12).unwrap();
        assert_eq!(sub.matrix().as_slice(), small.matrix().as_slice());
    }

    #[test]
    fn scan_rejects_bad_lists() {
        assert!(convergence_scan::<f64>(&[], 1, SignConvention::Repulsive).is_err());
        assert!(convergence_scan::<f64>(&[5, 5], 1, SignConvention::Repulsive).is_err());
        assert!(convergence_scan::<f64>(&[2], 5, SignConvention::Repulsive).is_err());
    }
}
