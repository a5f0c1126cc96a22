use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Real;

use super::SymError;

/// Exponent vector of a monomial, one entry per coordinate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiIndex(Vec<u16>);

impl MultiIndex {
    pub fn new(exponents: Vec<u16>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<&[u16]> for MultiIndex {
    fn from(e: &[u16]) -> Self {
        MultiIndex(e.to_vec())
    }
}

/// Sparse multivariate polynomial with real coefficients.
///
/// Only exact zeros are pruned, so cancellation never silently drops a term
/// that is merely small.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<T> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, T>,
}

impl<T: Real> Polynomial<T> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(MultiIndex::zeros(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, T::one())
    }

    /// `c · Πᵢ xᵢ^{eᵢ}`; the coordinate count is `exponents.len()`.
    pub fn monomial(exponents: &[u16], c: T) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(MultiIndex::from(exponents), c);
        p
    }

    /// The coordinate `x_coord` as a polynomial.
    pub fn var(nvars: usize, coord: usize) -> Self {
        assert!(coord < nvars, "coordinate {coord} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[coord] = 1;
        Self::monomial(&e, T::one())
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, SymError>
    where
        I: IntoIterator<Item = (Vec<u16>, T)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(SymError::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(MultiIndex::new(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (non-zero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u16]) -> T {
        self.terms
            .get(&MultiIndex::from(exponents))
            .copied()
            .unwrap_or_else(T::zero)
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Largest exponent of each coordinate over all terms.
    pub fn max_exponents(&self) -> Vec<usize> {
        let mut out = vec![0; self.nvars];
        for idx in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(idx.exponents()) {
                *o = (*o).max(e as usize);
            }
        }
        out
    }

    /// Adds `c·x^idx`, removing the entry if the coefficient becomes exactly zero.
    pub fn add_term(&mut self, idx: MultiIndex, c: T) {
        debug_assert_eq!(idx.len(), self.nvars);
        if c == T::zero() {
            return;
        }
        match self.terms.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s == T::zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), SymError> {
        if self.nvars != other.nvars {
            return Err(SymError::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SymError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (idx, &c) in &other.terms {
            out.add_term(idx.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SymError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (idx, &c) in &other.terms {
            out.add_term(idx.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SymError> {
        self.check_same(other)?;
        let mut out = Self::zero(self.nvars);
        for (ia, &ca) in &self.terms {
            for (ib, &cb) in &other.terms {
                out.add_term(ia.plus(ib), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (idx, &c) in &self.terms {
            out.add_term(idx.clone(), c * s);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Formal derivative with respect to `coord`.
    pub fn partial(&self, coord: usize) -> Result<Self, SymError> {
        if coord >= self.nvars {
            return Err(SymError::CoordinateOutOfRange {
                coord,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (idx, &c) in &self.terms {
            let e = idx.exponents()[coord];
            if e == 0 {
                continue;
            }
            let mut ex = idx.exponents().to_vec();
            ex[coord] -= 1;
            out.add_term(MultiIndex::new(ex), c * T::count(e as usize));
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[T]) -> T {
        assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(idx, &c)| {
                // monomial first, so swapping two variables is exact
                c * idx
                    .exponents()
                    .iter()
                    .zip(x)
                    .fold(T::one(), |acc, (&e, &xi)| acc * xi.powi(e as i32))
            })
            .sum()
    }

    /// Substitutes a permutation of coordinates: `result(x) = self(x[perm[0]], x[perm[1]], ..)`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (idx, &c) in &self.terms {
            let mut ex = vec![0; self.nvars];
            for (i, &e) in idx.exponents().iter().enumerate() {
                ex[perm[i]] += e;
            }
            out.add_term(MultiIndex::new(ex), c);
        }
        out
    }
}

impl<T: Real> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        self.checked_add(rhs).expect("polynomial coordinate counts differ")
    }
}

impl<T: Real> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        self.checked_sub(rhs).expect("polynomial coordinate counts differ")
    }
}

impl<T: Real> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        self.checked_mul(rhs).expect("polynomial coordinate counts differ")
    }
}

impl<T: Real> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        self.scale(-T::one())
    }
}

impl<T: Real> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (idx, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &e) in idx.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·x{v}")?,
                    _ => write!(f, "·x{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}
