//! Moments `∫ xᵅ e^{-Q(x)} dx` of product kernels.

use crate::quad::{integrate_1d_vec, AdaptiveOptions, Domain, ErrorTarget};
use crate::scalar::Real;

use super::{ProductKernel, SymError};

/// `∫_ℝ xⁿ e^{-ωx²} dx`: zero for odd `n`, `(n−1)!!·√(π/ω)/(2ω)^{n/2}` for even `n`.
pub fn gaussian_moment<T: Real>(n: usize, omega: T) -> Result<T, SymError> {
    if !(omega > T::zero()) || !omega.is_finite() {
        return Err(SymError::InvalidOmega(omega.as_f64()));
    }
    if n % 2 == 1 {
        return Ok(T::zero());
    }
    Ok(gaussian_moments_even(n, omega)[n / 2])
}

/// `[m₀, m₂, …, m_{2j}]` with `m_k = ∫ x^k e^{-ωx²}`, built by the ratio
/// recursion `m_{k+2} = m_k·(k+1)/(2ω)`.
fn gaussian_moments_even<T: Real>(max_deg: usize, omega: T) -> Vec<T> {
    let mut out = Vec::with_capacity(max_deg / 2 + 1);
    let mut m = (T::PI() / omega).sqrt();
    let two_w = T::lit(2.0) * omega;
    let mut k = 0;
    while k <= max_deg {
        out.push(m);
        m = m * T::count(k + 1) / two_w;
        k += 2;
    }
    out
}

/// Moments of one product kernel up to a per-axis degree.
///
/// All supported product kernels are even in every coordinate, so only even
/// moments are stored and odd ones read as exact zeros.
#[derive(Clone, Debug)]
pub enum MomentTable<T> {
    /// `axes[i][j] = ∫ xᵢ^{2j} w(xᵢ) dxᵢ` for a product weight.
    Separable { axes: Vec<Vec<T>> },
    /// `values[(m/2)·ny + k/2] = ∫∫ x^m y^k w(x, y)` for even `m, k`.
    Grid2 { nx: usize, ny: usize, values: Vec<T> },
}

impl<T: Real> MomentTable<T> {
    /// Computes the table for `kernel` covering exponents up to `max_exps`.
    pub fn compute(kernel: &ProductKernel<T>, max_exps: &[usize], tol: T) -> Result<Self, SymError> {
        if max_exps.len() != kernel.dim() {
            return Err(SymError::DimensionMismatch {
                expected: kernel.dim(),
                found: max_exps.len(),
            });
        }
        match kernel {
            ProductKernel::Gaussian { alphas } => {
                let axes = alphas
                    .iter()
                    .zip(max_exps)
                    .map(|(&a, &m)| {
                        if !(a > T::zero()) {
                            return Err(SymError::InvalidOmega(a.as_f64()));
                        }
                        Ok(gaussian_moments_even(m, a))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(MomentTable::Separable { axes })
            }
            ProductKernel::Quartic { alpha, beta } => {
                Ok(MomentTable::Separable {
                    axes: vec![quartic_moments(*alpha, *beta, max_exps[0], tol)?],
                })
            }
            ProductKernel::Coupled { ay, bx, c } => coupled_moments(*ay, *bx, *c, max_exps[0], max_exps[1], tol),
        }
    }

    /// Whether every exponent up to `max_exps` is available.
    pub fn covers(&self, max_exps: &[usize]) -> bool {
        match self {
            MomentTable::Separable { axes } => {
                axes.len() == max_exps.len() && axes.iter().zip(max_exps).all(|(a, &m)| a.len() > m / 2)
            }
            MomentTable::Grid2 { nx, ny, .. } => {
                max_exps.len() == 2 && *nx > max_exps[0] / 2 && *ny > max_exps[1] / 2
            }
        }
    }

    /// Moment for the exponent vector `idx`.
    #[inline]
    pub fn get(&self, idx: &[u16]) -> T {
        if idx.iter().any(|&e| e % 2 == 1) {
            return T::zero();
        }
        match self {
            MomentTable::Separable { axes } => axes
                .iter()
                .zip(idx)
                .fold(T::one(), |acc, (axis, &e)| acc * axis[e as usize / 2]),
            MomentTable::Grid2 { ny, values, .. } => {
                values[(idx[0] as usize / 2) * ny + idx[1] as usize / 2]
            }
        }
    }
}

fn quartic_moments<T: Real>(alpha: T, beta: T, max_deg: usize, tol: T) -> Result<Vec<T>, SymError> {
    let len = max_deg / 2 + 1;
    // width of the weight: where αx² or βx⁴ reaches O(1)
    let inv_width = alpha.max(T::zero()).sqrt().max(beta.sqrt().sqrt());
    let opts = AdaptiveOptions::new(tol)
        .with_scale(T::one() / inv_width)
        .with_target(ErrorTarget::Relative);
    let half = integrate_1d_vec(
        |x: T, acc: &mut [T]| {
            let x2 = x * x;
            let w = (-(alpha * x2 + beta * x2 * x2)).exp();
            if w == T::zero() {
                return;
            }
            let mut p = w;
            for a in acc.iter_mut() {
                *a += p;
                p *= x2;
            }
        },
        len,
        Domain::HalfLine,
        &opts,
    )?;
    Ok(half.into_iter().map(|v| v * T::lit(2.0)).collect())
}

/// `∫∫ x^m y^k e^{-ay y² - bx x² - c x²y²}`: the y-integral is done in closed
/// form at fixed x (a Gaussian with `Λ = ay + c x²`), the x-integral by
/// adaptive quadrature.
fn coupled_moments<T: Real>(ay: T, bx: T, c: T, max_x: usize, max_y: usize, tol: T) -> Result<MomentTable<T>, SymError> {
    if !(ay > T::zero()) || !(bx > T::zero()) || c < T::zero() {
        return Err(SymError::InvalidKernel(format!(
            "coupled product (ay={ay:?}, bx={bx:?}, c={c:?}) is not normalizable"
        )));
    }
    let nx = max_x / 2 + 1;
    let ny = max_y / 2 + 1;
    let scale = T::one() / (bx + c / ay).sqrt();
    let opts = AdaptiveOptions::new(tol)
        .with_scale(scale)
        .with_target(ErrorTarget::Relative);
    let sqrt_pi = T::PI().sqrt();
    let half = integrate_1d_vec(
        |x: T, acc: &mut [T]| {
            let x2 = x * x;
            let wx = (-bx * x2).exp();
            if wx == T::zero() {
                return;
            }
            let lambda = ay + c * x2;
            let two_l = T::lit(2.0) * lambda;
            let g0 = sqrt_pi / lambda.sqrt();
            let mut px = wx;
            for i in 0..nx {
                let mut g = g0 * px;
                for j in 0..ny {
                    acc[i * ny + j] += g;
                    g = g * T::count(2 * j + 1) / two_l;
                }
                px *= x2;
            }
        },
        nx * ny,
        Domain::HalfLine,
        &opts,
    )?;
    Ok(MomentTable::Grid2 {
        nx,
        ny,
        values: half.into_iter().map(|v| v * T::lit(2.0)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_examples() {
        assert!((gaussian_moment(0, 1.0f64).unwrap() - PI.sqrt()).abs() < 1e-15);
        assert_eq!(gaussian_moment(1, 2.7f64).unwrap(), 0.0);
        assert!((gaussian_moment(2, 1.0f64).unwrap() - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!(gaussian_moment(2, 0.0f64).is_err());
        assert!(gaussian_moment(2, -1.0f64).is_err());
    }

    #[test]
    fn gaussian_moment_against_quadrature() {
        for &w in &[0.3, 1.0, 2.5] {
            for n in [0usize, 2, 4, 8, 12] {
                let exact = gaussian_moment(n, w).unwrap();
                let num = crate::quad::integrate_1d(
                    |x: f64| x.powi(n as i32) * (-w * x * x).exp(),
                    Domain::Real,
                    1e-12,
                )
                .unwrap();
                assert!((exact - num).abs() < 1e-10 * exact, "n={n} w={w}");
            }
        }
    }

    #[test]
    fn quartic_reduces_to_gaussian() {
        let t = MomentTable::compute(&ProductKernel::Quartic { alpha: 0.8f64, beta: 1e-300 }, &[10], 1e-11).unwrap();
        for n in [0u16, 2, 4, 10] {
            let exact = gaussian_moment(n as usize, 0.8).unwrap();
            assert!((t.get(&[n]) / exact - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn coupled_with_zero_coupling_factorizes() {
        let t = MomentTable::compute(
            &ProductKernel::Coupled { ay: 0.7f64, bx: 1.3, c: 0.0 },
            &[6, 4],
            1e-11,
        )
        .unwrap();
        for (m, k) in [(0u16, 0u16), (2, 0), (0, 4), (6, 4), (4, 2)] {
            let exact = gaussian_moment(m as usize, 1.3).unwrap() * gaussian_moment(k as usize, 0.7).unwrap();
            assert!((t.get(&[m, k]) / exact - 1.0).abs() < 1e-9, "({m},{k})");
        }
        assert_eq!(t.get(&[1, 2]), 0.0);
    }

    #[test]
    fn coupled_against_tensor_quadrature() {
        // independent 2-D check with a fixed tensor Gauss–Legendre grid on a box
        let (ay, bx, c) = (0.6f64, 0.9, 0.4);
        let t = MomentTable::compute(&ProductKernel::Coupled { ay, bx, c }, &[4, 4], 1e-11).unwrap();
        let rule = crate::quad::gauss_legendre::<f64>(160).unwrap();
        let l = 9.0;
        for (m, k) in [(0i32, 0i32), (2, 2), (4, 0), (0, 4)] {
            let mut s = 0.0;
            for (&u, &wu) in rule.nodes().iter().zip(rule.weights()) {
                for (&v, &wv) in rule.nodes().iter().zip(rule.weights()) {
                    let (x, y) = (l * u, l * v);
                    s += wu * wv * x.powi(m) * y.powi(k) * (-ay * y * y - bx * x * x - c * x * x * y * y).exp();
                }
            }
            s *= l * l;
            let v = t.get(&[m as u16, k as u16]);
            assert!((v / s - 1.0).abs() < 1e-9, "({m},{k}) {v} vs {s}");
        }
    }
}
