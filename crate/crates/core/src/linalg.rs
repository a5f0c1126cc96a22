//! Small dense linear algebra: an equilibrated LU solve with a condition
//! estimate, and a symmetric eigensolver (Householder reduction to
//! tridiagonal form followed by implicit-shift QL).

use std::fmt;

use crate::scalar::Real;

const QL_MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    NotSquare { rows: usize, len: usize },
    Singular,
    NoConvergence { index: usize },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NotSquare { rows, len } => write!(f, "{len} entries do not form a {rows}x{rows} matrix"),
            LinalgError::Singular => write!(f, "matrix is singular"),
            LinalgError::NoConvergence { index } => {
                write!(f, "QL iteration did not converge for eigenvalue {index}")
            }
        }
    }
}

impl std::error::Error for LinalgError {}

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_row_major(n: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != n * n {
            return Err(LinalgError::NotSquare { rows: n, len: data.len() });
        }
        Ok(DenseMatrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        DenseMatrix { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Leading `m×m` block.
    pub fn leading(&self, m: usize) -> Self {
        assert!(m <= self.n);
        Self::from_fn(m, |i, j| self.get(i, j))
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `max_i Σ_j |a_ij|`.
    pub fn norm_inf(&self) -> T {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().map(|a| a.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_asymmetry(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.n {
            for j in 0..i {
                m = m.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        m
    }
}

/// Solution of `A x = b` with the 1-norm condition number of the
/// row/column-equilibrated matrix.
#[derive(Clone, Debug)]
pub struct LinearSolve<T> {
    pub x: Vec<T>,
    pub condition: T,
}

/// Solves `A x = b` by partial-pivoting LU after scaling rows and columns to
/// unit max-norm. `condition` is `‖Â‖₁‖Â⁻¹‖₁` of the scaled matrix `Â`.
pub fn solve_linear<T: Real>(a: &DenseMatrix<T>, b: &[T]) -> Result<LinearSolve<T>, LinalgError> {
    let n = a.n;
    if b.len() != n {
        return Err(LinalgError::NotSquare { rows: n, len: b.len() });
    }
    if n == 0 {
        return Ok(LinearSolve {
            x: Vec::new(),
            condition: T::one(),
        });
    }
    let mut r = vec![T::one(); n];
    let mut c = vec![T::one(); n];
    for i in 0..n {
        let m = (0..n).map(|j| a.get(i, j).abs()).fold(T::zero(), T::max);
        if m == T::zero() || !m.is_finite() {
            return Err(LinalgError::Singular);
        }
        r[i] = T::one() / m;
    }
    for j in 0..n {
        let m = (0..n).map(|i| (a.get(i, j) * r[i]).abs()).fold(T::zero(), T::max);
        if m == T::zero() {
            return Err(LinalgError::Singular);
        }
        c[j] = T::one() / m;
    }
    let scaled = DenseMatrix::from_fn(n, |i, j| a.get(i, j) * r[i] * c[j]);
    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| scaled.get(i, j).abs()).sum::<T>())
        .fold(T::zero(), T::max);
    let lu = Lu::factor(scaled)?;
    let mut inv_norm1 = T::zero();
    let mut e = vec![T::zero(); n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = T::zero());
        e[j] = T::one();
        let col = lu.solve(&e);
        inv_norm1 = inv_norm1.max(col.iter().map(|v| v.abs()).sum());
    }
    let rb: Vec<T> = b.iter().zip(&r).map(|(&bi, &ri)| bi * ri).collect();
    let y = lu.solve(&rb);
    let x = y.iter().zip(&c).map(|(&yi, &ci)| yi * ci).collect();
    let condition = norm1 * inv_norm1;
    if !condition.is_finite() {
        return Err(LinalgError::Singular);
    }
    Ok(LinearSolve { x, condition })
}

struct Lu<T> {
    m: DenseMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    fn factor(mut m: DenseMatrix<T>) -> Result<Self, LinalgError> {
        let n = m.n;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| m.get(i, k).abs().partial_cmp(&m.get(j, k).abs()).unwrap_or(std::cmp::Ordering::Equal))
                .expect("non-empty range");
            if m.get(p, k) == T::zero() || !m.get(p, k).is_finite() {
                return Err(LinalgError::Singular);
            }
            if p != k {
                for j in 0..n {
                    m.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = m.get(k, k);
            for i in k + 1..n {
                let f = m.get(i, k) / pivot;
                m.set(i, k, f);
                for j in k + 1..n {
                    let v = m.get(i, j) - f * m.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(Lu { m, perm })
    }

    fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.m.n;
        let mut y: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let v = y[i] - self.m.get(i, k) * y[k];
                y[i] = v;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let v = y[i] - self.m.get(i, k) * y[k];
                y[i] = v;
            }
            y[i] /= self.m.get(i, i);
        }
        y
    }
}

/// Eigen-decomposition of a symmetric matrix: ascending eigenvalues and, if
/// requested, the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SymEigen<T> {
    pub values: Vec<T>,
    pub vectors: Option<DenseMatrix<T>>,
}

impl<T: Real> SymEigen<T> {
    /// Eigenvector `k` as a vector.
    pub fn vector(&self, k: usize) -> Option<Vec<T>> {
        self.vectors.as_ref().map(|v| (0..v.n).map(|i| v.get(i, k)).collect())
    }
}

/// All eigenvalues (and optionally eigenvectors) of the symmetric matrix `a`.
/// Only the lower triangle is read.
pub fn symmetric_eigen<T: Real>(a: &DenseMatrix<T>, want_vectors: bool) -> Result<SymEigen<T>, LinalgError> {
    let n = a.n;
    if n == 0 {
        return Ok(SymEigen {
            values: Vec::new(),
            vectors: want_vectors.then(|| DenseMatrix::zeros(0)),
        });
    }
    let mut v = DenseMatrix::from_fn(n, |i, j| if j <= i { a.get(i, j) } else { a.get(j, i) });
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(&mut v, &mut d, &mut e);
    implicit_ql(&mut v, &mut d, &mut e, want_vectors)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = want_vectors.then(|| DenseMatrix::from_fn(n, |r, k| v.get(r, order[k])));
    Ok(SymEigen { values, vectors })
}

/// Householder reduction; on return `d` is the diagonal, `e[1..]` the
/// sub-diagonal and `v` the accumulated orthogonal transform.
fn tridiagonalize<T: Real>(v: &mut DenseMatrix<T>, d: &mut [T], e: &mut [T]) {
    let n = v.n;
    for j in 0..n {
        d[j] = v.get(n - 1, j);
    }
    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v.get(i - 1, j);
                v.set(i, j, T::zero());
                v.set(j, i, T::zero());
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }
            for j in 0..i {
                let f = d[j];
                v.set(j, i, f);
                let mut g = e[j] + v.get(j, j) * f;
                for k in j + 1..i {
                    g += v.get(k, j) * d[k];
                    e[k] += v.get(k, j) * f;
                }
                e[j] = g;
            }
            let mut f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    let val = v.get(k, j) - (f * e[k] + g * d[k]);
                    v.set(k, j, val);
                }
                d[j] = v.get(i - 1, j);
                v.set(i, j, T::zero());
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        let diag = v.get(i, i);
        v.set(n - 1, i, diag);
        v.set(i, i, T::one());
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v.get(k, i + 1) / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += v.get(k, i + 1) * v.get(k, j);
                }
                for k in 0..=i {
                    let val = v.get(k, j) - g * d[k];
                    v.set(k, j, val);
                }
            }
        }
        for k in 0..=i {
            v.set(k, i + 1, T::zero());
        }
    }
    for j in 0..n {
        d[j] = v.get(n - 1, j);
        v.set(n - 1, j, T::zero());
    }
    v.set(n - 1, n - 1, T::one());
    e[0] = T::zero();
}

fn implicit_ql<T: Real>(v: &mut DenseMatrix<T>, d: &mut [T], e: &mut [T], vectors: bool) -> Result<(), LinalgError> {
    let n = v.n;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    let eps = T::epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        // e[n-1] is zero, so m < n here
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > QL_MAX_SWEEPS {
                    return Err(LinalgError::NoConvergence { index: l });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (T::lit(2.0) * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;
                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if vectors {
                        for k in 0..n {
                            let h = v.get(k, i + 1);
                            let vi = v.get(k, i);
                            v.set(k, i + 1, s * vi + c * h);
                            v.set(k, i, c * vi - s * h);
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}
