//! SU(2) matrix model with `d` vectors in ℝ³: numeric family over `3d`
//! coordinates and the closed-form Gaussian results for arbitrary `d`.

use crate::engine::AnsatzFamily;
use crate::scalar::Real;
use crate::symcore::{ExpKernel, HamiltonianSpec, PolyExp, Polynomial, SymError, SystemLabel, WaveFunction};

use super::ModelError;

/// `Σ_{i<j} (qᵢ×qⱼ)² = Σ_{i<j} (|qᵢ|²|qⱼ|² − (qᵢ·qⱼ)²)`, coordinate `3i+a`
/// holding component `a` of `qᵢ`.
pub fn su2_potential<T: Real>(d: usize) -> Polynomial<T> {
    let n = 3 * d;
    let mut terms: Vec<(Vec<u16>, T)> = Vec::new();
    let mono = |pairs: &[(usize, u16)]| {
        let mut e = vec![0u16; n];
        for &(k, p) in pairs {
            e[k] += p;
        }
        e
    };
    for i in 0..d {
        for j in i + 1..d {
            for a in 0..3 {
                for b in 0..3 {
                    let (qi, qj) = (3 * i, 3 * j);
                    terms.push((mono(&[(qi + a, 2), (qj + b, 2)]), T::one()));
                    // −(Σ_a q_ia q_ja)² = −Σ_{a,b} q_ia q_ja q_ib q_jb
                    terms.push((mono(&[(qi + a, 1), (qj + a, 1), (qi + b, 1), (qj + b, 1)]), -T::one()));
                }
            }
        }
    }
    Polynomial::from_terms(n, terms).expect("3d coordinates")
}

/// `−Δ + V` on `3d` coordinates, optionally times `d^{-4/3}`.
pub fn su2_hamiltonian<T: Real>(d: usize, rescaled: bool) -> HamiltonianSpec<T> {
    let h = HamiltonianSpec::new(su2_potential(d), SystemLabel::Su2MatrixModel { d });
    if rescaled {
        h.scaled(rescale_factor(d), SystemLabel::RescaledSu2 { d })
    } else {
        h
    }
}

fn rescale_factor<T: Real>(d: usize) -> T {
    T::count(d).powf(T::lit(-4.0 / 3.0))
}

/// Level `n`: `(Σ q²)ⁿ e^{-ω Σ q²/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Su2Family {
    pub d: usize,
}

/// Hamiltonian and family for the numeric tower; needs `d ≥ 2`.
pub fn su2_family<T: Real>(d: usize) -> Result<(HamiltonianSpec<T>, Su2Family), ModelError> {
    if d < 2 {
        return Err(ModelError::InvalidDimension { d, min: 2 });
    }
    Ok((su2_hamiltonian(d, false), Su2Family { d }))
}

impl<T: Real> AnsatzFamily<T> for Su2Family {
    fn dim(&self) -> usize {
        3 * self.d
    }

    fn param_count(&self) -> usize {
        1
    }

    fn basis(&self, level: usize, params: &[T]) -> Result<WaveFunction<T>, SymError> {
        if params.len() != 1 {
            return Err(SymError::DimensionMismatch {
                expected: 1,
                found: params.len(),
            });
        }
        let n = 3 * self.d;
        let r2 = Polynomial::from_terms(
            n,
            (0..n).map(|k| {
                let mut e = vec![0u16; n];
                e[k] = 2;
                (e, T::one())
            }),
        )?;
        Ok(PolyExp::new(r2.pow(level as u32), ExpKernel::iso(params[0], n)?)?.into())
    }

    fn param_box(&self) -> Vec<(T, T)> {
        vec![(T::lit(0.01), T::lit(10.0))]
    }

    fn name(&self) -> String {
        format!("su2-d{}", self.d)
    }
}

/// Gaussian ground-state moments of the non-rescaled Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Moments<T> {
    pub h_mean: T,
    pub h2_mean: T,
    pub r_sq: T,
}

pub fn su2_analytic<T: Real>(d: usize, omega0: T) -> Result<Su2Moments<T>, ModelError> {
    if d < 1 {
        return Err(ModelError::InvalidDimension { d, min: 1 });
    }
    if !(omega0 > T::zero()) || !omega0.is_finite() {
        return Err(ModelError::InvalidParameter(format!("ω₀ = {omega0} must be positive")));
    }
    let df = T::count(d);
    let dm1 = df - T::one();
    let c = |v: f64| T::lit(v);
    let w = omega0;
    let h_mean = c(1.5) * df * w + c(0.75) * df * dm1 / (w * w);
    let h2_mean = c(0.75) * df * (c(2.0) + c(3.0) * df) * w * w
        + c(0.75) * df * dm1 * (c(3.0) * df - c(4.0)) / w
        + c(3.0 / 16.0) * df * dm1 * (df + c(2.0)) * (c(3.0) * df - T::one()) / w.powi(4);
    let r_sq = c(1.5) * df * w * w - c(3.0) * df * dm1 / w + c(0.375) * df * dm1 * (c(4.0) * df - T::one()) / w.powi(4);
    Ok(Su2Moments { h_mean, h2_mean, r_sq })
}

/// Optimal ground-state width and its energy and residual, non-rescaled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Ground<T> {
    pub d: usize,
    pub omega_min: T,
    pub e0: T,
    pub r0_sq: T,
    /// `2ω⁶ + 2(d−1)ω³ − 4d² + 5d − 1` at `omega_min`.
    pub char_residual: T,
}

impl<T: Real> Su2Ground<T> {
    /// `(E₀, R₀²)` for `d^{-4/3}·H`.
    pub fn rescaled(&self) -> (T, T) {
        let s: T = rescale_factor(self.d);
        (self.e0 * s, self.r0_sq * s * s)
    }
}

pub fn su2_ground_closed_form<T: Real>(d: usize) -> Result<Su2Ground<T>, ModelError> {
    if d < 2 {
        return Err(ModelError::InvalidDimension { d, min: 2 });
    }
    let df = T::count(d);
    let dm1 = df - T::one();
    let c = |v: f64| T::lit(v);
    let s = (c(3.0) * dm1 * (c(3.0) * df - T::one())).sqrt();
    let inner = T::one() - df + s;
    let omega_min = (c(0.5) * inner).cbrt();
    let e0 = c(3.0) * df * s / (c(4.0) * inner).powf(c(2.0 / 3.0));
    // 6d − 3 − 2s written without cancellation
    let gap = (c(12.0) * df - c(3.0)) / (c(6.0) * df - c(3.0) + c(2.0) * s);
    let r0_sq = c(18.0) * df * dm1 * gap / (c(4.0) * inner).powf(c(4.0 / 3.0));
    let w3 = omega_min.powi(3);
    let char_residual = c(2.0) * w3 * w3 + c(2.0) * dm1 * w3 - c(4.0) * df * df + c(5.0) * df - T::one();
    Ok(Su2Ground {
        d,
        omega_min,
        e0,
        r0_sq,
        char_residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Asymptotics<T> {
    pub omega_asym: T,
    pub e0_asym: T,
    pub r0_sq_asym: T,
}

impl<T: Real> Su2Asymptotics<T> {
    /// `(E₀, R₀²)` asymptotes for `d^{-4/3}·H`.
    pub fn rescaled(&self, d: usize) -> (T, T) {
        let s: T = rescale_factor(d);
        (self.e0_asym * s, self.r0_sq_asym * s * s)
    }
}

pub fn su2_large_d_asymptotics<T: Real>(d: usize) -> Result<Su2Asymptotics<T>, ModelError> {
    if d < 2 {
        return Err(ModelError::InvalidDimension { d, min: 2 });
    }
    let df = T::count(d);
    Ok(Su2Asymptotics {
        omega_asym: df.cbrt(),
        e0_asym: T::lit(2.25) * df.powf(T::lit(4.0 / 3.0)),
        r0_sq_asym: T::lit(2.25) * df.powf(T::lit(2.0 / 3.0)),
    })
}

/// `c₁₀ = −(3d/(ω₁+ω₀))·(2ω₀/(ω₁+ω₀))^{3d/2}`.
pub fn su2_c10<T: Real>(d: usize, omega0: T, omega1: T) -> T {
    let s = omega0 + omega1;
    let df = T::count(d);
    -(T::lit(3.0) * df / s) * (T::lit(1.5) * df * (T::lit(2.0) * omega0 / s).ln()).exp()
}

/// `⟨ψ₁,Hψ₁⟩` and `‖ψ₁‖²` (non-rescaled), both divided by `(π/ω₁)^{3d/2}`
/// so that large `d` stays finite.
pub fn su2_excited_terms<T: Real>(d: usize, omega0: T, omega1: T) -> (T, T) {
    let df = T::count(d);
    let dm1 = df - T::one();
    let c = |v: f64| T::lit(v);
    let (w0, w1) = (omega0, omega1);
    let s = w0 + w1;
    // (2√(πω₀)/(ω₁+ω₀))^{3d} / (π/ω₁)^{3d/2} = (2√(ω₀ω₁)/(ω₀+ω₁))^{3d} ≤ 1
    let rho = (c(3.0) * df * (c(2.0) * (w0 * w1).sqrt() / s).ln()).exp();
    let numer = c(3.0 / 8.0) * df * (c(9.0) * df * df - c(6.0) * df + c(8.0)) / w1
        + c(9.0 / 16.0) * df * dm1 * (df + c(2.0)) * (c(3.0) * df + c(4.0)) / w1.powi(4)
        + rho
            * ((c(-40.5) * df.powi(3) * w0 + c(6.75) * df.powi(3) * dm1 / (w0 * w0)) / (s * s)
                + c(18.0) * df * df * (c(3.0) * df + c(2.0)) * w0 * w0 / s.powi(3)
                - c(18.0) * df * df * dm1 * (c(3.0) * df + c(4.0)) / s.powi(4));
    let norm = c(0.75) * df * (c(3.0) * df + c(2.0)) / (w1 * w1) - c(9.0) * df * df / (s * s) * rho;
    (numer, norm)
}

/// `⟨ψ₁,Hψ₁⟩/‖ψ₁‖²` for the non-rescaled Hamiltonian.
pub fn su2_excited_rayleigh<T: Real>(d: usize, omega0: T, omega1: T) -> Result<T, ModelError> {
    if !(omega1 > T::zero()) || !(omega0 > T::zero()) {
        return Err(ModelError::InvalidParameter("widths must be positive".into()));
    }
    let (numer, norm) = su2_excited_terms(d, omega0, omega1);
    if !(norm > T::zero()) {
        return Err(ModelError::NonPositiveNorm {
            omega1: omega1.as_f64(),
        });
    }
    Ok(numer / norm)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Excited<T> {
    pub d: usize,
    pub omega0: T,
    pub omega1_min: T,
    /// Rescaled energy.
    pub e1: T,
    pub e1_unrescaled: T,
}

const EXCITED_GRID: usize = 801;

/// Global minimum over `ω₁` of the excited-state Rayleigh quotient at the
/// optimal `ω₀`: log-grid scan on `[ω₀/20, 20ω₀]`, then golden section in
/// the best grid cell. The landscape can have two basins.
pub fn su2_excited_closed_form<T: Real>(d: usize) -> Result<Su2Excited<T>, ModelError> {
    let g = su2_ground_closed_form::<T>(d)?;
    let w0 = g.omega_min;
    let (lo, hi) = ((w0 / T::lit(20.0)).ln(), (w0 * T::lit(20.0)).ln());
    let f = |u: T| su2_excited_rayleigh(d, w0, u.exp()).ok();
    let grid: Vec<T> = (0..EXCITED_GRID)
        .map(|i| lo + (hi - lo) * T::count(i) / T::count(EXCITED_GRID - 1))
        .collect();
    let mut best: Option<(usize, T)> = None;
    for (i, &u) in grid.iter().enumerate() {
        if let Some(v) = f(u) {
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((i, v));
            }
        }
    }
    let Some((i, _)) = best else {
        return Err(ModelError::NonPositiveNorm { omega1: w0.as_f64() });
    };
    let (mut a, mut b) = (grid[i.saturating_sub(1)], grid[(i + 1).min(EXCITED_GRID - 1)]);
    let invphi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let eval = |u: T| f(u).unwrap_or(T::infinity());
    let mut c = b - invphi * (b - a);
    let mut dd = a + invphi * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(dd));
    while (b - a).abs() > T::lit(1e-12) {
        if fc < fd {
            b = dd;
            dd = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = dd;
            fc = fd;
            dd = a + invphi * (b - a);
            fd = eval(dd);
        }
    }
    let u = (a + b) * T::lit(0.5);
    let omega1_min = u.exp();
    let e1_unrescaled = su2_excited_rayleigh(d, w0, omega1_min)?;
    Ok(Su2Excited {
        d,
        omega0: w0,
        omega1_min,
        e1: e1_unrescaled * rescale_factor(d),
        e1_unrescaled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_examples() {
        let v = su2_potential::<f64>(2);
        assert_eq!(v.nvars(), 6);
        assert_eq!(v.eval(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]), 1.0);
        assert_eq!(v.eval(&[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]), 0.0);
    }

    #[test]
    fn free_case() {
        let m = su2_analytic(1, 1.7f64).unwrap();
        assert!((m.h_mean - 1.5 * 1.7).abs() < 1e-14);
        assert!((m.r_sq - 1.5 * 1.7 * 1.7).abs() < 1e-13);
        assert!(su2_analytic(2, 0.0f64).is_err());
    }

    #[test]
    fn ground_d2() {
        let g = su2_ground_closed_form::<f64>(2).unwrap();
        assert!((g.omega_min - 1.128).abs() < 1e-3);
        assert!(g.char_residual.abs() < 1e-12);
        let (e, r2) = g.rescaled();
        assert!((e - 1.81).abs() < 0.005 && (r2.sqrt() - 0.524).abs() < 0.0005);
    }

    #[test]
    fn c10_d2_matches_specialized_form() {
        let (w0, w1) = (1.13f64, 1.4);
        let expect = -48.0 * w0.powi(3) / (w1 + w0).powi(4);
        assert!((su2_c10(2, w0, w1) - expect).abs() < 1e-14);
    }

    #[test]
    fn excited_d2() {
        let e = su2_excited_closed_form::<f64>(2).unwrap();
        assert!((e.e1 - 3.64).abs() < 0.005, "{}", e.e1);
        assert!((e.e1_unrescaled - 9.17).abs() < 0.01);
    }

    #[test]
    fn excited_large_d_stays_finite() {
        let e = su2_excited_closed_form::<f64>(300).unwrap();
        assert!(e.e1.is_finite());
        assert!((e.e1 - 2.26).abs() < 0.01, "{}", e.e1);
    }
}
