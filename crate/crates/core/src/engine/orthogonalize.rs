use crate::linalg::{solve_linear, DenseMatrix};
use crate::scalar::Real;
use crate::symcore::{apply_to_wavefunction, HamiltonianSpec, Integrator, WaveFunction};

use super::{AnsatzFamily, EngineError, Method, SolverConfig, SpectrumEstimate};

/// States of the lower levels, with their Gram matrix and a moment cache
/// warmed on their kernel pairs.
#[derive(Clone)]
pub struct FrozenSet<T> {
    states: Vec<WaveFunction<T>>,
    gram: DenseMatrix<T>,
    integrator: Integrator<T>,
}

impl<T: Real> FrozenSet<T> {
    /// With `h` given, the cache also covers `⟨Hψᵢ, Hψⱼ⟩`, which is what
    /// Method 2 evaluates at every candidate.
    pub fn new(
        estimates: &[SpectrumEstimate<T>],
        h: Option<&HamiltonianSpec<T>>,
        quad_tol: T,
    ) -> Result<Self, EngineError> {
        let states: Vec<WaveFunction<T>> = estimates.iter().map(|e| e.state.clone()).collect();
        Self::from_states(states, h, quad_tol)
    }

    pub fn from_states(
        states: Vec<WaveFunction<T>>,
        h: Option<&HamiltonianSpec<T>>,
        quad_tol: T,
    ) -> Result<Self, EngineError> {
        let mut integrator = Integrator::new(quad_tol);
        let n = states.len();
        if let Some(h) = h {
            let hs = states
                .iter()
                .map(|s| apply_to_wavefunction(h, s))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&WaveFunction<T>> = hs.iter().collect();
            integrator.gram(&refs, &refs)?;
        }
        let refs: Vec<&WaveFunction<T>> = states.iter().collect();
        let g = integrator.gram(&refs, &refs)?;
        let gram = DenseMatrix::from_fn(n, |i, j| g[i][j]);
        for i in 0..n {
            if !(gram.get(i, i) > T::zero()) {
                return Err(EngineError::Sym(crate::symcore::SymError::ZeroNorm));
            }
        }
        Ok(FrozenSet {
            states,
            gram,
            integrator,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[WaveFunction<T>] {
        &self.states
    }

    pub fn gram(&self) -> &DenseMatrix<T> {
        &self.gram
    }

    pub fn norm_sq(&self, i: usize) -> T {
        self.gram.get(i, i)
    }

    /// A moment cache seeded with the frozen kernel pairs.
    pub fn integrator(&self) -> Integrator<T> {
        self.integrator.clone()
    }
}

/// A level-`n` state orthogonal to the frozen ones.
#[derive(Clone, Debug)]
pub struct Orthogonalized<T> {
    pub state: WaveFunction<T>,
    pub coeffs: Vec<T>,
    pub norm_sq: T,
    /// `|⟨ψⱼ,ψₙ⟩|/(‖ψⱼ‖·‖ψₙ‖)` for each frozen `j`.
    pub overlaps: Vec<T>,
    /// Equilibrated condition estimate of the Method 1 system (1 otherwise).
    pub condition: T,
}

/// Method 1: `ψₙ = Σ_{l<n} cₗ fₗ(ω) + fₙ(ω)` with `⟨ψⱼ, ψₙ⟩ = 0`.
pub fn orthogonalize_m1<T: Real>(
    level: usize,
    params: &[T],
    family: &dyn AnsatzFamily<T>,
    frozen: &FrozenSet<T>,
    cfg: &SolverConfig<T>,
) -> Result<Orthogonalized<T>, EngineError> {
    m1_with(level, params, family, frozen, cfg, &mut frozen.integrator())
}

/// Method 2: `ψₙ = Σ_{l<n} cₗ ψₗ + fₙ(ω)` with `cₗ = −⟨fₙ,ψₗ⟩/‖ψₗ‖²`.
pub fn orthogonalize_m2<T: Real>(
    level: usize,
    params: &[T],
    family: &dyn AnsatzFamily<T>,
    frozen: &FrozenSet<T>,
    cfg: &SolverConfig<T>,
) -> Result<Orthogonalized<T>, EngineError> {
    m2_with(level, params, family, frozen, cfg, &mut frozen.integrator())
}

/// Dispatches on `cfg.method`, using `integ` for every inner product.
pub fn orthogonalize<T: Real>(
    level: usize,
    params: &[T],
    family: &dyn AnsatzFamily<T>,
    frozen: &FrozenSet<T>,
    cfg: &SolverConfig<T>,
    integ: &mut Integrator<T>,
) -> Result<Orthogonalized<T>, EngineError> {
    match cfg.method {
        Method::Method1 => m1_with(level, params, family, frozen, cfg, integ),
        Method::Method2 => m2_with(level, params, family, frozen, cfg, integ),
    }
}

fn check_level<T: Real>(level: usize, frozen: &FrozenSet<T>) -> Result<(), EngineError> {
    if frozen.len() != level {
        return Err(EngineError::FrozenMismatch {
            level,
            frozen: frozen.len(),
        });
    }
    Ok(())
}

fn m1_with<T: Real>(
    level: usize,
    params: &[T],
    family: &dyn AnsatzFamily<T>,
    frozen: &FrozenSet<T>,
    cfg: &SolverConfig<T>,
    integ: &mut Integrator<T>,
) -> Result<Orthogonalized<T>, EngineError> {
    check_level(level, frozen)?;
    let basis = (0..=level)
        .map(|l| family.basis(l, params))
        .collect::<Result<Vec<_>, _>>()?;
    if level == 0 {
        return finish(basis.into_iter().next().expect("level 0 basis"), Vec::new(), T::one(), frozen, cfg, integ);
    }
    let n = level;
    let mut pairs = Vec::with_capacity(n * (n + 1));
    for psi in frozen.states() {
        for f in &basis {
            pairs.push((psi, f));
        }
    }
    let g = integ.inner_many(&pairs)?;
    let a = DenseMatrix::from_fn(n, |j, l| g[j * (n + 1) + l]);
    let b: Vec<T> = (0..n).map(|j| -g[j * (n + 1) + n]).collect();
    let sol = match solve_linear(&a, &b) {
        Ok(s) => s,
        Err(crate::linalg::LinalgError::Singular) => {
            return Err(EngineError::Degenerate {
                condition: f64::INFINITY,
            })
        }
        Err(e) => return Err(e.into()),
    };
    if !(sol.condition <= cfg.cond_limit) {
        return Err(EngineError::Degenerate {
            condition: sol.condition.as_f64(),
        });
    }
    let mut parts: Vec<(T, &WaveFunction<T>)> = sol.x.iter().copied().zip(basis.iter()).collect();
    parts.push((T::one(), &basis[n]));
    let state = WaveFunction::linear_combination(&parts)?;
    finish(state, sol.x, sol.condition, frozen, cfg, integ)
}

fn m2_with<T: Real>(
    level: usize,
    params: &[T],
    family: &dyn AnsatzFamily<T>,
    frozen: &FrozenSet<T>,
    cfg: &SolverConfig<T>,
    integ: &mut Integrator<T>,
) -> Result<Orthogonalized<T>, EngineError> {
    check_level(level, frozen)?;
    let f = family.basis(level, params)?;
    if level == 0 {
        return finish(f, Vec::new(), T::one(), frozen, cfg, integ);
    }
    let pairs: Vec<_> = frozen.states().iter().map(|psi| (&f, psi)).collect();
    let overlaps = integ.inner_many(&pairs)?;
    let coeffs: Vec<T> = overlaps
        .iter()
        .enumerate()
        .map(|(l, &o)| -o / frozen.norm_sq(l))
        .collect();
    let mut parts: Vec<(T, &WaveFunction<T>)> = coeffs.iter().copied().zip(frozen.states()).collect();
    parts.push((T::one(), &f));
    let state = WaveFunction::linear_combination(&parts)?;
    finish(state, coeffs, T::one(), frozen, cfg, integ)
}

fn finish<T: Real>(
    state: WaveFunction<T>,
    coeffs: Vec<T>,
    condition: T,
    frozen: &FrozenSet<T>,
    cfg: &SolverConfig<T>,
    integ: &mut Integrator<T>,
) -> Result<Orthogonalized<T>, EngineError> {
    if state.is_zero() {
        return Err(EngineError::Degenerate {
            condition: f64::INFINITY,
        });
    }
    let mut pairs = vec![(&state, &state)];
    pairs.extend(frozen.states().iter().map(|psi| (psi, &state)));
    let v = integ.inner_many(&pairs)?;
    let norm_sq = v[0];
    if !(norm_sq > T::zero()) {
        return Err(EngineError::Degenerate {
            condition: f64::INFINITY,
        });
    }
    let mut overlaps = Vec::with_capacity(frozen.len());
    for (j, &o) in v[1..].iter().enumerate() {
        let r = o.abs() / (frozen.norm_sq(j) * norm_sq).sqrt();
        if !(r < cfg.orth_tol) {
            return Err(EngineError::Orthogonality {
                index: j,
                residual: r.as_f64(),
            });
        }
        overlaps.push(r);
    }
    Ok(Orthogonalized {
        state,
        coeffs,
        norm_sq,
        overlaps,
        condition,
    })
}
