use std::fmt;

use crate::scalar::Real;

use super::{PolyExp, Polynomial, SymError, WaveFunction};

/// Which physical system a Hamiltonian describes. Informational only; the
/// operator itself is fixed by `dim`, `potential` and `prefactor`.
#[derive(Clone, Debug, PartialEq)]
pub enum SystemLabel {
    Harmonic,
    Anharmonic1D,
    X2Y2,
    Su2MatrixModel { d: usize },
    RescaledSu2 { d: usize },
    Custom(String),
}

impl fmt::Display for SystemLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemLabel::Harmonic => write!(f, "harmonic"),
            SystemLabel::Anharmonic1D => write!(f, "anharmonic"),
            SystemLabel::X2Y2 => write!(f, "x2y2"),
            SystemLabel::Su2MatrixModel { d } => write!(f, "su2(d={d})"),
            SystemLabel::RescaledSu2 { d } => write!(f, "su2-rescaled(d={d})"),
            SystemLabel::Custom(s) => write!(f, "{s}"),
        }
    }
}

/// `H = prefactor · (−Δ + V)` on `dim` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec<T> {
    dim: usize,
    potential: Polynomial<T>,
    prefactor: T,
    label: SystemLabel,
}

impl<T: Real> HamiltonianSpec<T> {
    pub fn new(potential: Polynomial<T>, label: SystemLabel) -> Self {
        HamiltonianSpec {
            dim: potential.nvars(),
            potential,
            prefactor: T::one(),
            label,
        }
    }

    /// Same operator multiplied by `s`.
    pub fn scaled(mut self, s: T, label: SystemLabel) -> Self {
        self.prefactor *= s;
        self.label = label;
        self
    }

    /// `−∂² + x²` in one coordinate.
    pub fn harmonic() -> Self {
        Self::new(Polynomial::monomial(&[2], T::one()), SystemLabel::Harmonic)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn potential(&self) -> &Polynomial<T> {
        &self.potential
    }

    pub fn prefactor(&self) -> T {
        self.prefactor
    }

    pub fn label(&self) -> &SystemLabel {
        &self.label
    }
}

/// `H f` for `f = p·e^{-Q}`, exactly, over the same kernel:
/// `Σᵢ(−∂ᵢ²p + 2∂ᵢp·∂ᵢQ + p·∂ᵢ²Q − p·(∂ᵢQ)²) + V·p`.
pub fn apply_hamiltonian<T: Real>(h: &HamiltonianSpec<T>, f: &PolyExp<T>) -> Result<WaveFunction<T>, SymError> {
    if h.dim != f.dim() {
        return Err(SymError::DimensionMismatch {
            expected: h.dim,
            found: f.dim(),
        });
    }
    let p = f.poly();
    let q = f.kernel().exponent();
    let mut out = p.checked_mul(&h.potential)?;
    for i in 0..h.dim {
        let dp = p.partial(i)?;
        let ddp = dp.partial(i)?;
        let dq = q.partial(i)?;
        let ddq = dq.partial(i)?;
        out = out.checked_sub(&ddp)?;
        out = out.checked_add(&dp.checked_mul(&dq)?.scale(T::lit(2.0)))?;
        out = out.checked_add(&p.checked_mul(&ddq)?)?;
        out = out.checked_sub(&p.checked_mul(&dq.checked_mul(&dq)?)?)?;
    }
    if h.prefactor != T::one() {
        out = out.scale(h.prefactor);
    }
    Ok(WaveFunction::from_term(PolyExp::new(out, *f.kernel())?))
}

/// `H ψ`, term by term.
pub fn apply_to_wavefunction<T: Real>(h: &HamiltonianSpec<T>, psi: &WaveFunction<T>) -> Result<WaveFunction<T>, SymError> {
    if h.dim != psi.dim() {
        return Err(SymError::DimensionMismatch {
            expected: h.dim,
            found: psi.dim(),
        });
    }
    let mut terms = Vec::with_capacity(psi.terms().len());
    for t in psi.terms() {
        terms.extend(apply_hamiltonian(h, t)?.terms().iter().cloned());
    }
    if terms.is_empty() {
        return Ok(psi.clone());
    }
    WaveFunction::new(terms)
}
