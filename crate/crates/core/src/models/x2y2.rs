//! `H = −∂ₓ² − ∂ᵧ² + x²y²` with a symmetrized coupled-Gaussian density.

use std::fmt;
use std::str::FromStr;

use crate::engine::AnsatzFamily;
use crate::scalar::Real;
use crate::symcore::{ExpKernel, HamiltonianSpec, PolyExp, Polynomial, SymError, SystemLabel, WaveFunction};

use super::ModelError;

/// Irreducible representations of C₄ᵥ, labelled by behaviour under
/// `x → −x`, `y → −y` and `x ↔ y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum C4vSector {
    Eee,
    Eeo,
    Ooe,
    Ooo,
    EoMinusOe,
}

impl fmt::Display for C4vSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            C4vSector::Eee => "EEE",
            C4vSector::Eeo => "EEO",
            C4vSector::Ooe => "OOE",
            C4vSector::Ooo => "OOO",
            C4vSector::EoMinusOe => "EO-OE",
        };
        write!(f, "{s}")
    }
}

impl FromStr for C4vSector {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, ModelError> {
        match s.to_ascii_uppercase().as_str() {
            "EEE" => Ok(C4vSector::Eee),
            "EEO" => Ok(C4vSector::Eeo),
            "OOE" => Ok(C4vSector::Ooe),
            "OOO" => Ok(C4vSector::Ooo),
            "EO-OE" | "EO−OE" | "EOMINUSOE" => Ok(C4vSector::EoMinusOe),
            other => Err(ModelError::UnsupportedSector(other.to_string())),
        }
    }
}

/// A supported sector with its prefactor sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SectorSpec {
    pub sector: C4vSector,
}

impl SectorSpec {
    pub fn new(sector: C4vSector) -> Result<Self, ModelError> {
        match sector {
            C4vSector::Eee | C4vSector::Eeo => Ok(SectorSpec { sector }),
            other => Err(ModelError::UnsupportedSector(other.to_string())),
        }
    }

    pub fn group(&self) -> &'static str {
        "C4v"
    }

    /// EEE: `1, x²+y², x⁴+y⁴, …`; EEO: `x²−y², x⁴−y⁴, …`.
    pub fn prefactor<T: Real>(&self, level: usize) -> Polynomial<T> {
        match self.sector {
            C4vSector::Eee if level == 0 => Polynomial::one(2),
            C4vSector::Eee => {
                let k = 2 * level as u16;
                Polynomial::from_terms(2, [(vec![k, 0], T::one()), (vec![0, k], T::one())]).expect("2 coordinates")
            }
            _ => {
                let k = 2 * level as u16 + 2;
                Polynomial::from_terms(2, [(vec![k, 0], T::one()), (vec![0, k], -T::one())]).expect("2 coordinates")
            }
        }
    }

    /// Signs under `x → −x`, `y → −y`, `x ↔ y`.
    pub fn signs(&self) -> [i8; 3] {
        match self.sector {
            C4vSector::Eee => [1, 1, 1],
            _ => [1, 1, -1],
        }
    }
}

pub fn x2y2_hamiltonian<T: Real>() -> HamiltonianSpec<T> {
    HamiltonianSpec::new(Polynomial::monomial(&[2, 2], T::one()), SystemLabel::X2Y2)
}

/// `ρ = e^{-ω₁y² - ω₂x² - ω₃x²y²} + e^{-ω₁x² - ω₂y² - ω₃x²y²}`.
pub fn x2y2_density<T: Real>(omega: &[T]) -> Result<WaveFunction<T>, ModelError> {
    if omega.len() != 3 {
        return Err(ModelError::InvalidParameter(format!("density needs 3 parameters, got {}", omega.len())));
    }
    let (w1, w2, w3) = (omega[0], omega[1], omega[2]);
    let one = Polynomial::one(2);
    let a = PolyExp::new(one.clone(), ExpKernel::coupled(w1, w2, w3)?)?;
    let b = PolyExp::new(one, ExpKernel::coupled(w2, w1, w3)?)?;
    Ok(WaveFunction::new(vec![a, b])?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct X2y2Family {
    pub sector: SectorSpec,
    /// Extra multistart points, per level.
    pub seeds: Vec<Vec<[f64; 3]>>,
}

/// The method only decides which seeds are attached; the basis is the same.
pub fn x2y2_family(sector: C4vSector) -> Result<X2y2Family, ModelError> {
    Ok(X2y2Family {
        sector: SectorSpec::new(sector)?,
        seeds: Vec::new(),
    })
}

impl X2y2Family {
    pub fn with_seeds(mut self, seeds: Vec<Vec<[f64; 3]>>) -> Self {
        self.seeds = seeds;
        self
    }
}

impl<T: Real> AnsatzFamily<T> for X2y2Family {
    fn dim(&self) -> usize {
        2
    }

    fn param_count(&self) -> usize {
        3
    }

    fn basis(&self, level: usize, params: &[T]) -> Result<WaveFunction<T>, SymError> {
        if params.len() != 3 {
            return Err(SymError::DimensionMismatch {
                expected: 3,
                found: params.len(),
            });
        }
        let p: Polynomial<T> = self.sector.prefactor(level);
        let (w1, w2, w3) = (params[0], params[1], params[2]);
        let a = PolyExp::new(p.clone(), ExpKernel::coupled(w1, w2, w3)?)?;
        let b = PolyExp::new(p, ExpKernel::coupled(w2, w1, w3)?)?;
        WaveFunction::new(vec![a, b])
    }

    fn param_box(&self) -> Vec<(T, T)> {
        vec![(T::lit(1e-9), T::lit(10.0)); 3]
    }

    fn grid_box(&self) -> Vec<(T, T)> {
        vec![(T::lit(0.03), T::lit(3.0)); 3]
    }

    fn seeds(&self, level: usize) -> Vec<Vec<T>> {
        self.seeds
            .get(level)
            .map(|s| s.iter().map(|w| w.iter().map(|&v| T::lit(v)).collect()).collect())
            .unwrap_or_default()
    }

    fn name(&self) -> String {
        format!("x2y2-{}", self.sector.sector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_collapse() {
        let rho = x2y2_density(&[0.7f64, 0.7, 0.0]).unwrap();
        assert_eq!(rho.terms().len(), 1);
        let (x, y) = (0.3, -1.1);
        assert!((rho.eval(&[x, y]) - 2.0 * (-0.7 * (x * x + y * y)).exp()).abs() < 1e-15);
    }

    #[test]
    fn unsupported_sectors() {
        for s in [C4vSector::Ooe, C4vSector::Ooo, C4vSector::EoMinusOe] {
            assert!(matches!(x2y2_family(s), Err(ModelError::UnsupportedSector(_))));
        }
    }

    #[test]
    fn degenerate_density_rejected() {
        assert!(x2y2_density(&[0.0f64, 0.0, 0.0]).is_err());
        assert!(x2y2_density(&[1.0f64, 1.0]).is_err());
    }

    #[test]
    fn eeo_level_zero_flips_under_swap() {
        let fam = x2y2_family(C4vSector::Eeo).unwrap();
        let f = AnsatzFamily::<f64>::basis(&fam, 0, &[0.2, 0.5, 0.1]).unwrap();
        let (x, y) = (0.4, 1.3);
        assert!((f.eval(&[x, y]) + f.eval(&[y, x])).abs() < 1e-15);
        assert!(f.eval(&[x, y]).abs() > 1e-3);
    }
}
