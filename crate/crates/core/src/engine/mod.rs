//! Level-by-level construction of mutually orthogonal trial states, each
//! fixed by minimizing its residual norm over the family parameters.

mod optimize;
mod orthogonalize;
mod solver;

use std::fmt;

use crate::linalg::LinalgError;
use crate::scalar::Real;
use crate::symcore::{SymError, WaveFunction};

pub use optimize::{
    multistart, nelder_mead, transform_for, MultistartOptions, MultistartResult, NelderMeadResult, ParamTransform,
};
pub use orthogonalize::{orthogonalize, orthogonalize_m1, orthogonalize_m2, FrozenSet, Orthogonalized};
pub use solver::{solve_level, solve_tower};

/// How a level's state is made orthogonal to the frozen ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// All basis members at the candidate parameters; coefficients from a
    /// linear system.
    Method1,
    /// Frozen states mixed in with closed-form projection coefficients.
    Method2,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Method1 => write!(f, "method1"),
            Method::Method2 => write!(f, "method2"),
        }
    }
}

/// What is minimized over the parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    ResidualNorm,
    /// Energy expectation at level 0, residual norm above.
    RayleighForGroundState,
}

/// Indexed trial functions `fₙ(x; ω)`.
pub trait AnsatzFamily<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    fn param_count(&self) -> usize;

    /// `fₙ` at parameters `params`.
    fn basis(&self, level: usize, params: &[T]) -> Result<WaveFunction<T>, SymError>;

    /// Feasible region; the optimizer never leaves it.
    fn param_box(&self) -> Vec<(T, T)>;

    /// Region covered by the multistart grid.
    fn grid_box(&self) -> Vec<(T, T)> {
        self.param_box()
    }

    /// Extra starting points for the given level.
    fn seeds(&self, _level: usize) -> Vec<Vec<T>> {
        Vec::new()
    }

    fn name(&self) -> String;
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T> {
    pub method: Method,
    pub objective: Objective,
    /// Multistart points per parameter.
    pub grid_points: usize,
    /// Number of best grid points refined by the simplex search.
    pub refine_starts: usize,
    pub xtol: T,
    pub ftol: T,
    pub max_evals: usize,
    pub orth_tol: T,
    pub quad_tol: T,
    pub cond_limit: T,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(method: Method) -> Self {
        SolverConfig {
            method,
            objective: Objective::ResidualNorm,
            grid_points: 5,
            refine_starts: 3,
            xtol: T::lit(1e-6),
            ftol: T::lit(1e-10),
            max_evals: 2000,
            orth_tol: T::lit(1e-8),
            quad_tol: T::lit(1e-10),
            cond_limit: T::lit(1e12),
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let pos = |v: T| v > T::zero() && v.is_finite();
        if !(pos(self.xtol) && pos(self.ftol) && pos(self.orth_tol) && pos(self.quad_tol) && pos(self.cond_limit)) {
            return Err(EngineError::InvalidConfig("tolerances must be positive and finite".into()));
        }
        if self.grid_points == 0 || self.refine_starts == 0 || self.max_evals == 0 {
            return Err(EngineError::InvalidConfig(
                "grid_points, refine_starts and max_evals must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One level's result.
#[derive(Clone, Debug)]
pub struct SpectrumEstimate<T> {
    pub level: usize,
    pub energy: T,
    pub residual: T,
    pub omega: Vec<T>,
    /// `cₙ₀ … cₙ,ₙ₋₁`.
    pub coeffs: Vec<T>,
    pub state: WaveFunction<T>,
    /// `‖state‖²`.
    pub norm_sq: T,
    /// Objective evaluations spent on this level.
    pub evaluations: usize,
}

/// `|reference − E| ≤ R`.
pub fn error_bound_check<T: Real>(est: &SpectrumEstimate<T>, reference: T) -> bool {
    (reference - est.energy).abs() <= est.residual
}

#[derive(Debug, Clone, PartialEq)]
pub enum EngineError {
    InvalidConfig(String),
    FrozenMismatch { level: usize, frozen: usize },
    Degenerate { condition: f64 },
    Orthogonality { index: usize, residual: f64 },
    AllStartsInfeasible { level: usize },
    NonFinite { level: usize, omega: Vec<f64> },
    Sym(SymError),
    Linalg(LinalgError),
    AtLevel { level: usize, source: Box<EngineError> },
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::InvalidConfig(s) => write!(f, "invalid solver configuration: {s}"),
            EngineError::FrozenMismatch { level, frozen } => {
                write!(f, "level {level} needs {level} frozen states, got {frozen}")
            }
            EngineError::Degenerate { condition } => {
                write!(f, "degenerate parameters: Gram condition estimate {condition:e}")
            }
            EngineError::Orthogonality { index, residual } => {
                write!(f, "orthogonality to frozen state {index} violated: {residual:e}")
            }
            EngineError::AllStartsInfeasible { level } => write!(f, "every start point is infeasible at level {level}"),
            EngineError::NonFinite { level, omega } => {
                write!(f, "non-finite objective at level {level}, parameters {omega:?}")
            }
            EngineError::Sym(e) => write!(f, "{e}"),
            EngineError::Linalg(e) => write!(f, "{e}"),
            EngineError::AtLevel { level, source } => write!(f, "level {level}: {source}"),
        }
    }
}

impl std::error::Error for EngineError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            EngineError::Sym(e) => Some(e),
            EngineError::Linalg(e) => Some(e),
            EngineError::AtLevel { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}

impl From<SymError> for EngineError {
    fn from(e: SymError) -> Self {
        EngineError::Sym(e)
    }
}

impl From<LinalgError> for EngineError {
    fn from(e: LinalgError) -> Self {
        EngineError::Linalg(e)
    }
}
