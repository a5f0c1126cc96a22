//! Concrete Hamiltonians and ansatz families: the quartic oscillator, the
//! two-dimensional `x²y²` model and the SU(2) matrix model.

pub mod anharmonic;
pub mod su2;
pub mod x2y2;

use std::fmt;

use crate::symcore::SymError;

pub use anharmonic::{anharmonic_family, anharmonic_hamiltonian, AnharmonicBasis, AnharmonicFamily, Parity};
pub use su2::{
    su2_analytic, su2_c10, su2_excited_closed_form, su2_excited_rayleigh, su2_excited_terms, su2_family, su2_ground_closed_form, su2_hamiltonian,
    su2_large_d_asymptotics, su2_potential, Su2Asymptotics, Su2Excited, Su2Family, Su2Ground, Su2Moments,
};
pub use x2y2::{x2y2_density, x2y2_family, x2y2_hamiltonian, C4vSector, SectorSpec, X2y2Family};

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    UnsupportedSector(String),
    InvalidDimension { d: usize, min: usize },
    InvalidParameter(String),
    /// `‖ψ₁‖²` came out non-positive at a candidate width.
    NonPositiveNorm { omega1: f64 },
    Sym(SymError),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::UnsupportedSector(s) => write!(f, "symmetry sector {s} has no ansatz"),
            ModelError::InvalidDimension { d, min } => write!(f, "d = {d} is below the minimum {min}"),
            ModelError::InvalidParameter(s) => write!(f, "invalid parameter: {s}"),
            ModelError::NonPositiveNorm { omega1 } => {
                write!(f, "closed-form norm of the excited state is not positive at ω₁ = {omega1}")
            }
            ModelError::Sym(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ModelError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            ModelError::Sym(e) => Some(e),
            _ => None,
        }
    }
}

impl From<SymError> for ModelError {
    fn from(e: SymError) -> Self {
        ModelError::Sym(e)
    }
}
