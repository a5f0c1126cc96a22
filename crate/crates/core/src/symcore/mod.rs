//! Polynomial-times-exponential algebra: Hamiltonian application, inner
//! products and the two quadratic functionals built on them.

mod functional;
mod hamiltonian;
mod kernel;
mod moments;
mod polynomial;
mod wavefunction;

use std::fmt;

use crate::quad::QuadError;

pub use functional::{expectations, rayleigh, residual_sq, variance_objective, Expectations};
pub use hamiltonian::{apply_hamiltonian, apply_to_wavefunction, HamiltonianSpec, SystemLabel};
pub use kernel::{ExpKernel, ProductKernel};
pub use moments::{gaussian_moment, MomentTable};
pub use polynomial::{MultiIndex, Polynomial};
pub use wavefunction::{inner_product, Integrator, PolyExp, WaveFunction, DEFAULT_INNER_TOL};

#[derive(Debug, Clone, PartialEq)]
pub enum SymError {
    DimensionMismatch { expected: usize, found: usize },
    CoordinateOutOfRange { coord: usize, nvars: usize },
    InvalidOmega(f64),
    InvalidKernel(String),
    UnsupportedKernelPair(String),
    EmptyWaveFunction,
    ZeroNorm,
    Quad(QuadError),
}

impl fmt::Display for SymError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymError::DimensionMismatch { expected, found } => {
                write!(f, "coordinate count mismatch: expected {expected}, found {found}")
            }
            SymError::CoordinateOutOfRange { coord, nvars } => {
                write!(f, "coordinate {coord} out of range for {nvars} variables")
            }
            SymError::InvalidOmega(w) => write!(f, "Gaussian width must be positive and finite, got {w}"),
            SymError::InvalidKernel(k) => write!(f, "kernel is not normalizable: {k}"),
            SymError::UnsupportedKernelPair(p) => write!(f, "no integration route for kernel pair {p}"),
            SymError::EmptyWaveFunction => write!(f, "wave function has no terms"),
            SymError::ZeroNorm => write!(f, "wave function has zero norm"),
            SymError::Quad(e) => write!(f, "moment integration failed: {e}"),
        }
    }
}

impl std::error::Error for SymError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            SymError::Quad(e) => Some(e),
            _ => None,
        }
    }
}

impl From<QuadError> for SymError {
    fn from(e: QuadError) -> Self {
        SymError::Quad(e)
    }
}
