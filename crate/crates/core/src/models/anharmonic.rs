//! `H = −∂² + x⁴` with the `xⁿ`-times-Gaussian bases.

use std::fmt;
use std::str::FromStr;

use crate::engine::AnsatzFamily;
use crate::scalar::Real;
use crate::symcore::{ExpKernel, HamiltonianSpec, PolyExp, Polynomial, SymError, SystemLabel, WaveFunction};

use super::ModelError;

/// ℤ₂ sector under `x → −x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Power of `x` multiplying the kernel at `level`.
    pub fn power(self, level: usize) -> usize {
        match self {
            Parity::Even => 2 * level,
            Parity::Odd => 2 * level + 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

impl FromStr for Parity {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, ModelError> {
        match s.to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(ModelError::UnsupportedSector(other.to_string())),
        }
    }
}

/// `gn`: `xᵏ e^{-ωx²/2}`; `gn2`: `xᵏ e^{-ω₁x²/2 - ω₂x⁴/4}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AnharmonicBasis {
    Gn,
    Gn2,
}

impl fmt::Display for AnharmonicBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnharmonicBasis::Gn => write!(f, "gn"),
            AnharmonicBasis::Gn2 => write!(f, "gn2"),
        }
    }
}

impl FromStr for AnharmonicBasis {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, ModelError> {
        match s.to_ascii_lowercase().as_str() {
            "gn" => Ok(AnharmonicBasis::Gn),
            "gn2" => Ok(AnharmonicBasis::Gn2),
            other => Err(ModelError::InvalidParameter(format!("unknown basis {other}"))),
        }
    }
}

pub fn anharmonic_hamiltonian<T: Real>() -> HamiltonianSpec<T> {
    HamiltonianSpec::new(Polynomial::monomial(&[4], T::one()), SystemLabel::Anharmonic1D)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnharmonicFamily {
    pub sector: Parity,
    pub basis: AnharmonicBasis,
}

pub fn anharmonic_family(sector: Parity, basis: AnharmonicBasis) -> AnharmonicFamily {
    AnharmonicFamily { sector, basis }
}

impl<T: Real> AnsatzFamily<T> for AnharmonicFamily {
    fn dim(&self) -> usize {
        1
    }

    fn param_count(&self) -> usize {
        match self.basis {
            AnharmonicBasis::Gn => 1,
            AnharmonicBasis::Gn2 => 2,
        }
    }

    fn basis(&self, level: usize, params: &[T]) -> Result<WaveFunction<T>, SymError> {
        let expected = <Self as AnsatzFamily<T>>::param_count(self);
        if params.len() != expected {
            return Err(SymError::DimensionMismatch {
                expected,
                found: params.len(),
            });
        }
        let kernel = match self.basis {
            AnharmonicBasis::Gn => ExpKernel::iso(params[0], 1)?,
            AnharmonicBasis::Gn2 => ExpKernel::quartic(params[0], params[1])?,
        };
        let p = Polynomial::monomial(&[self.sector.power(level) as u16], T::one());
        Ok(PolyExp::new(p, kernel)?.into())
    }

    fn param_box(&self) -> Vec<(T, T)> {
        vec![(T::lit(0.01), T::lit(10.0)); <Self as AnsatzFamily<T>>::param_count(self)]
    }

    fn name(&self) -> String {
        format!("anharmonic-{}-{}", self.basis, self.sector)
    }
}
