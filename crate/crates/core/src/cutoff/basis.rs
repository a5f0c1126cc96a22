//! Orthonormal radial and angular factors of the cut-off basis and the
//! pairing function that flattens `(l, n)`.

use crate::scalar::Real;

/// Weight exponent of the radial measure `r⁵ dr`.
pub const RADIAL_ALPHA: usize = 5;

/// Cantor pairing `p(l, n) = (l+n)(l+n+1)/2 + n`.
pub fn pairing(l: usize, n: usize) -> usize {
    let s = l + n;
    s * (s + 1) / 2 + n
}

/// Inverse of [`pairing`].
pub fn unpairing(a: usize) -> (usize, usize) {
    // largest s with s(s+1)/2 ≤ a
    let mut s = ((((8 * a + 1) as f64).sqrt() - 1.0) / 2.0) as usize;
    while s * (s + 1) / 2 > a {
        s -= 1;
    }
    while (s + 1) * (s + 2) / 2 <= a {
        s += 1;
    }
    let n = a - s * (s + 1) / 2;
    (s - n, n)
}

/// `φₙ(r) = √(n!/(n+5)!)·Lₙ⁽⁵⁾(r)·e^{-r/2}` for `n ≤ max_n`, orthonormal
/// under `r⁵ dr`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadialBasis {
    pub max_n: usize,
}

impl RadialBasis {
    pub fn new(max_n: usize) -> Self {
        RadialBasis { max_n }
    }

    /// `√(n!/(n+5)!)`.
    pub fn norm_const<T: Real>(n: usize) -> T {
        let denom: T = (1..=RADIAL_ALPHA).map(|k| T::count(n + k)).fold(T::one(), |a, b| a * b);
        denom.sqrt().recip()
    }

    /// Polynomial parts `(pₙ, qₙ)` with `φₙ = pₙ e^{-r/2}` and
    /// `φₙ' = qₙ e^{-r/2}`, for every `n ≤ max_n`.
    pub fn poly_values<T: Real>(&self, r: T) -> (Vec<T>, Vec<T>) {
        let l5 = laguerre_all(self.max_n, RADIAL_ALPHA, r);
        // d/dr Lₙ⁽ᵅ⁾ = −Lₙ₋₁⁽ᵅ⁺¹⁾
        let l6 = laguerre_all(self.max_n, RADIAL_ALPHA + 1, r);
        let half = T::lit(0.5);
        let mut p = Vec::with_capacity(self.max_n + 1);
        let mut q = Vec::with_capacity(self.max_n + 1);
        for n in 0..=self.max_n {
            let c: T = Self::norm_const(n);
            let dl = if n == 0 { T::zero() } else { -l6[n - 1] };
            p.push(c * l5[n]);
            q.push(c * (dl - half * l5[n]));
        }
        (p, q)
    }

    pub fn eval<T: Real>(&self, n: usize, r: T) -> T {
        assert!(n <= self.max_n, "radial index {n} above {}", self.max_n);
        let (p, _) = self.poly_values(r);
        p[n] * (-r * T::lit(0.5)).exp()
    }

    pub fn deriv<T: Real>(&self, n: usize, r: T) -> T {
        assert!(n <= self.max_n, "radial index {n} above {}", self.max_n);
        let (_, q) = self.poly_values(r);
        q[n] * (-r * T::lit(0.5)).exp()
    }
}

/// `L₀⁽ᵅ⁾ … L_max⁽ᵅ⁾` at `r` by the three-term recurrence.
pub fn laguerre_all<T: Real>(max: usize, alpha: usize, r: T) -> Vec<T> {
    let a = T::count(alpha);
    let mut out = Vec::with_capacity(max + 1);
    out.push(T::one());
    if max == 0 {
        return out;
    }
    out.push(T::one() + a - r);
    for k in 1..max {
        let kf = T::count(k);
        let next = ((T::lit(2.0) * kf + T::one() + a - r) * out[k] - (kf + a) * out[k - 1]) / (kf + T::one());
        out.push(next);
    }
    out
}

/// `P̃ₗ(u) = √((2l+1)/2)·Pₗ(u)`, orthonormal on `[−1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AngularBasis {
    pub max_l: usize,
}

impl AngularBasis {
    pub fn new(max_l: usize) -> Self {
        AngularBasis { max_l }
    }

    pub fn eval_all<T: Real>(&self, u: T) -> Vec<T> {
        let mut p = Vec::with_capacity(self.max_l + 1);
        p.push(T::one());
        if self.max_l > 0 {
            p.push(u);
        }
        for l in 1..self.max_l {
            let lf = T::count(l);
            let next = ((T::lit(2.0) * lf + T::one()) * u * p[l] - lf * p[l - 1]) / (lf + T::one());
            p.push(next);
        }
        p.iter()
            .enumerate()
            .map(|(l, &v)| v * ((T::count(2 * l + 1)) * T::lit(0.5)).sqrt())
            .collect()
    }

    pub fn eval<T: Real>(&self, l: usize, u: T) -> T {
        assert!(l <= self.max_l, "angular index {l} above {}", self.max_l);
        self.eval_all(u)[l]
    }

    /// `⟨P̃ₗ', u·P̃ₗ⟩`: `(m+1)/√((2m+1)(2m+3))` with `m = min(l, l')` when
    /// `|l−l'| = 1`, zero otherwise.
    pub fn u_coupling<T: Real>(l: usize, l2: usize) -> T {
        if l.abs_diff(l2) != 1 {
            return T::zero();
        }
        let m = l.min(l2);
        T::count(m + 1) / (T::count(2 * m + 1) * T::count(2 * m + 3)).sqrt()
    }

    /// `⟨P̃ₗ', (1−u)·P̃ₗ⟩`.
    pub fn one_minus_u<T: Real>(l: usize, l2: usize) -> T {
        let diag = if l == l2 { T::one() } else { T::zero() };
        diag - Self::u_coupling::<T>(l, l2)
    }
}
