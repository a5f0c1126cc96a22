//! One-dimensional numerical integration.
//!
//! Fixed-order Gauss–Legendre and Gauss–Laguerre rules back the cut-off
//! benchmark; the adaptive Gauss–Kronrod integrator handles the
//! non-Gaussian kernels of the variational inner products.

mod adaptive;
mod rules;

use std::fmt;

pub use adaptive::{
    integrate_1d, integrate_1d_vec, AdaptiveOptions, Domain, ErrorTarget, DEFAULT_MAX_SEGMENTS,
};
pub use rules::{gauss_laguerre, gauss_legendre, QuadRule, RuleKind};

#[derive(Debug, Clone, PartialEq)]
pub enum QuadError {
    InvalidOrder(usize),
    InvalidTolerance(f64),
    RootFinding { order: usize, index: usize },
    /// Subdivision budget exhausted; carries the best estimate and its error.
    BudgetExceeded { estimate: f64, error: f64 },
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::InvalidOrder(n) => write!(f, "quadrature order must be >= 1, got {n}"),
            QuadError::InvalidTolerance(t) => write!(f, "invalid tolerance or scale {t}"),
            QuadError::RootFinding { order, index } => {
                write!(f, "Newton iteration failed for root {index} of order-{order} rule")
            }
            QuadError::BudgetExceeded { estimate, error } => write!(
                f,
                "adaptive integration did not converge: estimate {estimate:e}, error {error:e}"
            ),
        }
    }
}

impl std::error::Error for QuadError {}
