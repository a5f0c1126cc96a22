use std::cmp::Ordering;

use crate::scalar::Real;

use super::{Polynomial, SymError};

/// Exponential weight `e^{-Q(x)}` multiplying a polynomial prefactor.
///
/// Every variant has a polynomial exponent `Q`, so derivatives of
/// `p·e^{-Q}` stay inside the same kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExpKernel<T> {
    /// `e^{-ω Σᵢ xᵢ² / 2}` in `dim` coordinates.
    IsoGaussian { omega: T, dim: usize },
    /// `e^{-ω₁x²/2 - ω₂x⁴/4}`.
    Quartic1D { omega1: T, omega2: T },
    /// `e^{-a y² - b x² - c x² y²}` with `x` the first coordinate.
    CoupledXY { a: T, b: T, c: T },
}

impl<T: Real> ExpKernel<T> {
    pub fn iso(omega: T, dim: usize) -> Result<Self, SymError> {
        let k = ExpKernel::IsoGaussian { omega, dim };
        k.validate()?;
        Ok(k)
    }

    pub fn quartic(omega1: T, omega2: T) -> Result<Self, SymError> {
        let k = ExpKernel::Quartic1D { omega1, omega2 };
        k.validate()?;
        Ok(k)
    }

    pub fn coupled(a: T, b: T, c: T) -> Result<Self, SymError> {
        let k = ExpKernel::CoupledXY { a, b, c };
        k.validate()?;
        Ok(k)
    }

    pub fn dim(&self) -> usize {
        match *self {
            ExpKernel::IsoGaussian { dim, .. } => dim,
            ExpKernel::Quartic1D { .. } => 1,
            ExpKernel::CoupledXY { .. } => 2,
        }
    }

    /// Checks that `|kernel|²` times any polynomial is integrable.
    pub fn validate(&self) -> Result<(), SymError> {
        let finite_nonneg = |v: T| v.is_finite() && v >= T::zero();
        let ok = match *self {
            ExpKernel::IsoGaussian { omega, dim } => dim > 0 && omega.is_finite() && omega > T::zero(),
            ExpKernel::Quartic1D { omega1, omega2 } => {
                omega1.is_finite()
                    && finite_nonneg(omega2)
                    && (omega2 > T::zero() || omega1 > T::zero())
            }
            // y-decay at x = 0 needs a > 0, x-decay along y = 0 needs b > 0
            ExpKernel::CoupledXY { a, b, c } => {
                finite_nonneg(c) && a.is_finite() && b.is_finite() && a > T::zero() && b > T::zero()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(SymError::InvalidKernel(format!("{self:?}")))
        }
    }

    /// The exponent `Q` with `kernel = e^{-Q}`.
    pub fn exponent(&self) -> Polynomial<T> {
        match *self {
            ExpKernel::IsoGaussian { omega, dim } => {
                let mut q = Polynomial::zero(dim);
                for i in 0..dim {
                    let mut e = vec![0; dim];
                    e[i] = 2;
                    q = &q + &Polynomial::monomial(&e, omega * T::lit(0.5));
                }
                q
            }
            ExpKernel::Quartic1D { omega1, omega2 } => &Polynomial::monomial(&[2], omega1 * T::lit(0.5))
                + &Polynomial::monomial(&[4], omega2 * T::lit(0.25)),
            ExpKernel::CoupledXY { a, b, c } => Polynomial::from_terms(
                2,
                [(vec![0, 2], a), (vec![2, 0], b), (vec![2, 2], c)],
            )
            .expect("two coordinates"),
        }
    }

    pub fn eval(&self, x: &[T]) -> T {
        (-self.exponent().eval(x)).exp()
    }

    /// Parameters as a flat list, in a fixed order per variant.
    pub fn params(&self) -> Vec<T> {
        match *self {
            ExpKernel::IsoGaussian { omega, dim } => vec![omega, T::count(dim)],
            ExpKernel::Quartic1D { omega1, omega2 } => vec![omega1, omega2],
            ExpKernel::CoupledXY { a, b, c } => vec![a, b, c],
        }
    }

    fn variant_rank(&self) -> u8 {
        match self {
            ExpKernel::IsoGaussian { .. } => 0,
            ExpKernel::Quartic1D { .. } => 1,
            ExpKernel::CoupledXY { .. } => 2,
        }
    }

    /// Total order used to canonicalize pair evaluations.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.variant_rank().cmp(&other.variant_rank()).then_with(|| {
            for (a, b) in self.params().iter().zip(other.params()) {
                match a.partial_cmp(&b).unwrap_or(Ordering::Equal) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }

    /// The kernel of `self · other`, reduced to the smallest family that
    /// represents it. Fails for pairs without an integration route.
    pub fn product(&self, other: &Self) -> Result<ProductKernel<T>, SymError> {
        use ExpKernel::*;
        let half = T::lit(0.5);
        match (*self, *other) {
            (IsoGaussian { omega: w1, dim: d1 }, IsoGaussian { omega: w2, dim: d2 }) if d1 == d2 => {
                Ok(ProductKernel::Gaussian {
                    alphas: vec![(w1 + w2) * half; d1],
                })
            }
            (Quartic1D { .. }, _) | (_, Quartic1D { .. }) if self.dim() == 1 && other.dim() == 1 => {
                let (a1, b1) = self.as_quartic();
                let (a2, b2) = other.as_quartic();
                let alpha = (a1 + a2) * half;
                let beta = (b1 + b2) * T::lit(0.25);
                if beta == T::zero() {
                    Ok(ProductKernel::Gaussian { alphas: vec![alpha] })
                } else {
                    Ok(ProductKernel::Quartic { alpha, beta })
                }
            }
            (CoupledXY { .. }, _) | (_, CoupledXY { .. }) if self.dim() == 2 && other.dim() == 2 => {
                let (a1, b1, c1) = self.as_coupled();
                let (a2, b2, c2) = other.as_coupled();
                let (ay, bx, c) = (a1 + a2, b1 + b2, c1 + c2);
                if c == T::zero() {
                    Ok(ProductKernel::Gaussian { alphas: vec![bx, ay] })
                } else {
                    Ok(ProductKernel::Coupled { ay, bx, c })
                }
            }
            _ => Err(SymError::UnsupportedKernelPair(format!("{self:?} × {other:?}"))),
        }
    }

    fn as_quartic(&self) -> (T, T) {
        match *self {
            ExpKernel::IsoGaussian { omega, .. } => (omega, T::zero()),
            ExpKernel::Quartic1D { omega1, omega2 } => (omega1, omega2),
            ExpKernel::CoupledXY { .. } => unreachable!("2-D kernel in 1-D product"),
        }
    }

    fn as_coupled(&self) -> (T, T, T) {
        match *self {
            ExpKernel::IsoGaussian { omega, .. } => (omega * T::lit(0.5), omega * T::lit(0.5), T::zero()),
            ExpKernel::CoupledXY { a, b, c } => (a, b, c),
            ExpKernel::Quartic1D { .. } => unreachable!("1-D kernel in 2-D product"),
        }
    }
}

/// Weight `e^{-Q₁-Q₂}` of a kernel pair, in the form the moment
/// routines consume.
#[derive(Clone, Debug, PartialEq)]
pub enum ProductKernel<T> {
    /// `e^{-Σᵢ αᵢ xᵢ²}`; separable, moments in closed form.
    Gaussian { alphas: Vec<T> },
    /// `e^{-α x² - β x⁴}`.
    Quartic { alpha: T, beta: T },
    /// `e^{-ay·y² - bx·x² - c·x²y²}`.
    Coupled { ay: T, bx: T, c: T },
}

impl<T: Real> ProductKernel<T> {
    pub fn dim(&self) -> usize {
        match self {
            ProductKernel::Gaussian { alphas } => alphas.len(),
            ProductKernel::Quartic { .. } => 1,
            ProductKernel::Coupled { .. } => 2,
        }
    }

    /// Bit-exact key for caching moment tables.
    pub fn key(&self) -> Vec<u64> {
        let bits = |v: &T| v.as_f64().to_bits();
        match self {
            ProductKernel::Gaussian { alphas } => {
                let mut k = vec![0];
                k.extend(alphas.iter().map(bits));
                k
            }
            ProductKernel::Quartic { alpha, beta } => vec![1, bits(alpha), bits(beta)],
            ProductKernel::Coupled { ay, bx, c } => vec![2, bits(ay), bits(bx), bits(c)],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ExpKernel::iso(1.0f64, 3).is_ok());
        assert!(ExpKernel::iso(0.0f64, 3).is_err());
        assert!(ExpKernel::quartic(-0.5f64, 0.3).is_ok());
        assert!(ExpKernel::quartic(0.0f64, 0.0).is_err());
        assert!(ExpKernel::coupled(0.3f64, 1e-8, 0.1).is_ok());
        assert!(ExpKernel::coupled(0.0f64, 0.2, 0.1).is_err());
    }

    #[test]
    fn exponent_matches_eval() {
        let k = ExpKernel::coupled(0.3f64, 0.7, 0.2).unwrap();
        let (x, y): (f64, f64) = (0.4, -1.3);
        let direct = (-0.3 * y * y - 0.7 * x * x - 0.2 * x * x * y * y).exp();
        assert!((k.eval(&[x, y]) - direct).abs() < 1e-15);
    }

    #[test]
    fn iso_promotes_in_products() {
        let g = ExpKernel::iso(1.0f64, 1).unwrap();
        let q = ExpKernel::quartic(0.5, 0.2).unwrap();
        assert_eq!(
            g.product(&q).unwrap(),
            ProductKernel::Quartic { alpha: 0.75, beta: 0.05 }
        );
        let g2 = ExpKernel::iso(1.0f64, 2).unwrap();
        let c = ExpKernel::coupled(0.1, 0.2, 0.3).unwrap();
        assert_eq!(
            g2.product(&c).unwrap(),
            ProductKernel::Coupled { ay: 0.6, bx: 0.7, c: 0.3 }
        );
        assert!(g.product(&c).is_err());
    }
}
