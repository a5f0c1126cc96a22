use crate::scalar::Real;

use super::{apply_to_wavefunction, HamiltonianSpec, Integrator, SymError, WaveFunction};

/// `‖ψ‖²`, `⟨ψ,Hψ⟩` and `‖Hψ‖²` from one moment batch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Expectations<T> {
    pub norm_sq: T,
    pub h: T,
    pub h2: T,
}

impl<T: Real> Expectations<T> {
    pub fn rayleigh(&self) -> T {
        self.h / self.norm_sq
    }

    /// `‖(H−E)ψ‖²/‖ψ‖²`, clamped at zero against rounding.
    pub fn residual_sq(&self, e: T) -> T {
        let r = (self.h2 - T::lit(2.0) * e * self.h + e * e * self.norm_sq) / self.norm_sq;
        r.max(T::zero())
    }

    /// `(E_opt, R²)` with `E_opt` the Rayleigh quotient.
    pub fn variance(&self) -> (T, T) {
        let e = self.rayleigh();
        (e, self.residual_sq(e))
    }
}

pub fn expectations<T: Real>(
    psi: &WaveFunction<T>,
    h: &HamiltonianSpec<T>,
    integ: &mut Integrator<T>,
) -> Result<Expectations<T>, SymError> {
    if psi.is_zero() {
        return Err(SymError::ZeroNorm);
    }
    let hpsi = apply_to_wavefunction(h, psi)?;
    let v = if hpsi.is_zero() {
        let s = integ.inner(psi, psi)?;
        vec![s, T::zero(), T::zero()]
    } else {
        integ.inner_many(&[(psi, psi), (psi, &hpsi), (&hpsi, &hpsi)])?
    };
    if !(v[0] > T::zero()) {
        return Err(SymError::ZeroNorm);
    }
    Ok(Expectations {
        norm_sq: v[0],
        h: v[1],
        h2: v[2],
    })
}

/// `⟨ψ,Hψ⟩/‖ψ‖²`.
pub fn rayleigh<T: Real>(psi: &WaveFunction<T>, h: &HamiltonianSpec<T>) -> Result<T, SymError> {
    Ok(expectations(psi, h, &mut Integrator::default())?.rayleigh())
}

/// `‖(H−E)ψ‖²/‖ψ‖²`.
pub fn residual_sq<T: Real>(psi: &WaveFunction<T>, h: &HamiltonianSpec<T>, e: T) -> Result<T, SymError> {
    Ok(expectations(psi, h, &mut Integrator::default())?.residual_sq(e))
}

/// `(E_opt, R²)`: the Rayleigh quotient and the residual there, which is the
/// minimum of the residual over all real `E`.
pub fn variance_objective<T: Real>(psi: &WaveFunction<T>, h: &HamiltonianSpec<T>) -> Result<(T, T), SymError> {
    Ok(expectations(psi, h, &mut Integrator::default())?.variance())
}
