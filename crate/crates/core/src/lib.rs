//! Variational orthogonalization for approximate eigenvalues of polynomial
//! Hamiltonians, with an independent cut-off diagonalization benchmark.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the models and CLI use.

// `!(a < b)` comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cutoff;
pub mod engine;
pub mod linalg;
pub mod models;
pub mod quad;
pub mod scalar;
pub mod symcore;

pub use scalar::Real;

pub type Polynomial = symcore::Polynomial<f64>;
pub type ExpKernel = symcore::ExpKernel<f64>;
pub type PolyExp = symcore::PolyExp<f64>;
pub type WaveFunction = symcore::WaveFunction<f64>;
pub type HamiltonianSpec = symcore::HamiltonianSpec<f64>;
pub type QuadRule = quad::QuadRule<f64>;
pub type SpectrumEstimate = engine::SpectrumEstimate<f64>;
pub type SolverConfig = engine::SolverConfig<f64>;
