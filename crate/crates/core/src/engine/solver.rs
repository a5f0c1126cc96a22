use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::scalar::Real;
use crate::symcore::{expectations, HamiltonianSpec, SymError};

use super::optimize::{multistart, MultistartOptions};
use super::orthogonalize::{orthogonalize, FrozenSet, Orthogonalized};
use super::{AnsatzFamily, EngineError, Method, Objective, SolverConfig, SpectrumEstimate};

struct Evaluation<T> {
    objective: T,
    energy: T,
    r_sq: T,
    orth: Orthogonalized<T>,
}

fn evaluate<T: Real>(
    level: usize,
    params: &[T],
    h: &HamiltonianSpec<T>,
    family: &dyn AnsatzFamily<T>,
    frozen: &FrozenSet<T>,
    cfg: &SolverConfig<T>,
) -> Result<Evaluation<T>, EngineError> {
    let mut integ = frozen.integrator();
    let orth = orthogonalize(level, params, family, frozen, cfg, &mut integ)?;
    let ex = expectations(&orth.state, h, &mut integ)?;
    let (energy, r_sq) = ex.variance();
    let objective = match cfg.objective {
        Objective::RayleighForGroundState if level == 0 => energy,
        _ => r_sq,
    };
    Ok(Evaluation {
        objective,
        energy,
        r_sq,
        orth,
    })
}

/// Fixes level `level` given the frozen states `frozen[0..level]`.
pub fn solve_level<T: Real>(
    level: usize,
    h: &HamiltonianSpec<T>,
    family: &dyn AnsatzFamily<T>,
    frozen: &[SpectrumEstimate<T>],
    cfg: &SolverConfig<T>,
) -> Result<SpectrumEstimate<T>, EngineError> {
    cfg.validate()?;
    if frozen.len() != level {
        return Err(EngineError::FrozenMismatch {
            level,
            frozen: frozen.len(),
        });
    }
    if family.dim() != h.dim() {
        return Err(SymError::DimensionMismatch {
            expected: h.dim(),
            found: family.dim(),
        }
        .into());
    }
    let warm = (cfg.method == Method::Method2).then_some(h);
    let fset = FrozenSet::new(frozen, warm, cfg.quad_tol)?;
    let evals = AtomicUsize::new(0);
    let nan_at: Mutex<Option<Vec<T>>> = Mutex::new(None);
    let objective = |w: &[T]| -> T {
        evals.fetch_add(1, Ordering::Relaxed);
        match evaluate(level, w, h, family, &fset, cfg) {
            Ok(ev) => {
                if ev.objective.is_nan() {
                    let mut slot = nan_at.lock().expect("poisoned");
                    slot.get_or_insert_with(|| w.to_vec());
                }
                ev.objective
            }
            Err(_) => T::infinity(),
        }
    };
    let opts = MultistartOptions {
        grid_points: cfg.grid_points,
        refine_starts: cfg.refine_starts,
        xtol: cfg.xtol,
        ftol: cfg.ftol,
        max_evals: cfg.max_evals,
    };
    let best = multistart(objective, &family.param_box(), &family.grid_box(), &family.seeds(level), &opts);
    let Some(best) = best else {
        let nan = nan_at.into_inner().expect("poisoned");
        return Err(match nan {
            Some(w) => EngineError::NonFinite {
                level,
                omega: w.iter().map(|v| v.as_f64()).collect(),
            },
            None => EngineError::AllStartsInfeasible { level },
        });
    };
    let ev = evaluate(level, &best.x, h, family, &fset, cfg)?;
    Ok(SpectrumEstimate {
        level,
        energy: ev.energy,
        residual: ev.r_sq.sqrt(),
        omega: best.x,
        coeffs: ev.orth.coeffs,
        state: ev.orth.state,
        norm_sq: ev.orth.norm_sq,
        evaluations: evals.into_inner(),
    })
}

/// Levels `0..levels`, each frozen before the next is solved.
pub fn solve_tower<T: Real>(
    levels: usize,
    h: &HamiltonianSpec<T>,
    family: &dyn AnsatzFamily<T>,
    cfg: &SolverConfig<T>,
) -> Result<Vec<SpectrumEstimate<T>>, EngineError> {
    if levels == 0 {
        return Err(EngineError::InvalidConfig("a tower needs at least one level".into()));
    }
    let mut out: Vec<SpectrumEstimate<T>> = Vec::with_capacity(levels);
    for n in 0..levels {
        let est = solve_level(n, h, family, &out, cfg).map_err(|e| EngineError::AtLevel {
            level: n,
            source: Box::new(e),
        })?;
        out.push(est);
    }
    Ok(out)
}
