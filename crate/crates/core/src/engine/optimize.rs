//! Derivative-free minimization: Nelder–Mead simplex and a grid multistart.

use rayon::prelude::*;

use crate::scalar::Real;

/// Coordinates the optimizer works in for one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamTransform {
    /// `u = ln ω`; used when the box is strictly positive.
    Log,
    Linear,
}

pub fn transform_for<T: Real>(lo: T) -> ParamTransform {
    if lo > T::zero() {
        ParamTransform::Log
    } else {
        ParamTransform::Linear
    }
}

impl ParamTransform {
    fn to_u<T: Real>(self, x: T) -> T {
        match self {
            ParamTransform::Log => x.ln(),
            ParamTransform::Linear => x,
        }
    }

    fn inverse<T: Real>(self, u: T) -> T {
        match self {
            ParamTransform::Log => u.exp(),
            ParamTransform::Linear => u,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadResult<T> {
    pub x: Vec<T>,
    pub f: T,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0` with initial simplex edges `step`. Stops when the
/// simplex is within `xtol` (max-norm) and its values within
/// `ftol·(1 + |f_best|)`, or after `max_evals` evaluations.
/// Non-finite values are treated as `+∞`.
pub fn nelder_mead<T: Real, F: FnMut(&[T]) -> T>(
    mut f: F,
    x0: &[T],
    step: &[T],
    xtol: T,
    ftol: T,
    max_evals: usize,
) -> NelderMeadResult<T> {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[T], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            T::infinity()
        }
    };
    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step[i];
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    let (alpha, gamma, rho, sigma) = (T::one(), T::lit(2.0), T::lit(0.5), T::lit(0.5));
    let mut converged = false;
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (*a - *b).abs()))
            .fold(T::zero(), T::max);
        let spread = if worst.is_finite() { worst - best } else { T::infinity() };
        if size <= xtol && spread <= ftol * (T::one() + best.abs()) {
            converged = true;
            break;
        }
        let centroid: Vec<T> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<T>() / T::count(n))
            .collect();
        let along = |t: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(&c, &w)| c + t * (c - w))
                .collect()
        };
        let xr = along(alpha);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = along(gamma);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = along(rho);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = along(-rho);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, &bi) in x.iter_mut().zip(&x0) {
                        *xi = bi + sigma * (*xi - bi);
                    }
                    *v = eval(x, &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, f) = simplex.swap_remove(0);
    NelderMeadResult { x, f, evals, converged }
}

#[derive(Clone, Debug)]
pub struct MultistartResult<T> {
    pub x: Vec<T>,
    pub f: T,
    pub evals: usize,
    /// Index of the winning start among grid points followed by seeds.
    pub start_index: usize,
}

/// Settings shared by [`multistart`] calls.
#[derive(Clone, Debug)]
pub struct MultistartOptions<T> {
    pub grid_points: usize,
    pub refine_starts: usize,
    pub xtol: T,
    pub ftol: T,
    pub max_evals: usize,
}

/// Grid scan over `grid_box` plus `seeds`, then simplex refinement of the
/// seeds and of the `refine_starts` best grid points, all inside
/// `param_box`. Returns `None` when every start is infeasible.
///
/// Starts are evaluated in parallel; the winner is chosen by value, then
/// (for values within `ftol`) by the smaller parameter norm, then by start
/// index, so the result does not depend on scheduling.
pub fn multistart<T: Real, F: Fn(&[T]) -> T + Sync>(
    f: F,
    param_box: &[(T, T)],
    grid_box: &[(T, T)],
    seeds: &[Vec<T>],
    opts: &MultistartOptions<T>,
) -> Option<MultistartResult<T>> {
    let k = param_box.len();
    let tr: Vec<ParamTransform> = param_box.iter().map(|&(lo, _)| transform_for(lo)).collect();
    let ubox: Vec<(T, T)> = param_box
        .iter()
        .zip(&tr)
        .map(|(&(lo, hi), t)| (t.to_u(lo), t.to_u(hi)))
        .collect();
    let to_x = |u: &[T]| -> Vec<T> { u.iter().zip(&tr).map(|(&v, t)| t.inverse(v)).collect() };
    let g = |u: &[T]| -> T {
        if u.iter().zip(&ubox).any(|(&v, &(lo, hi))| !(v >= lo && v <= hi)) {
            return T::infinity();
        }
        let v = f(&to_x(u));
        if v.is_finite() {
            v
        } else {
            T::infinity()
        }
    };

    // grid in u-space, first coordinate varying slowest
    let axes: Vec<Vec<T>> = grid_box
        .iter()
        .zip(&tr)
        .zip(&ubox)
        .map(|((&(lo, hi), t), &(blo, bhi))| {
            let (a, b) = (t.to_u(lo).max(blo), t.to_u(hi).min(bhi));
            let m = opts.grid_points;
            if m == 1 {
                vec![(a + b) * T::lit(0.5)]
            } else {
                (0..m).map(|i| a + (b - a) * T::count(i) / T::count(m - 1)).collect()
            }
        })
        .collect();
    let mut starts: Vec<Vec<T>> = Vec::new();
    let total: usize = axes.iter().map(Vec::len).product();
    for mut idx in 0..total {
        let mut u = vec![T::zero(); k];
        for d in (0..k).rev() {
            let len = axes[d].len();
            u[d] = axes[d][idx % len];
            idx /= len;
        }
        starts.push(u);
    }
    let n_grid = starts.len();
    for s in seeds {
        starts.push(s.iter().zip(&tr).map(|(&v, t)| t.to_u(v)).collect());
    }
    let values: Vec<T> = starts.par_iter().map(|u| g(u)).collect();
    let mut ranked: Vec<usize> = (0..n_grid).filter(|&i| values[i].is_finite()).collect();
    ranked.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut chosen: Vec<usize> = ranked.into_iter().take(opts.refine_starts).collect();
    chosen.extend((n_grid..starts.len()).filter(|&i| values[i].is_finite()));
    if chosen.is_empty() {
        return None;
    }
    let step: Vec<T> = tr
        .iter()
        .zip(&ubox)
        .map(|(t, &(lo, hi))| match t {
            ParamTransform::Log => T::lit(0.1),
            ParamTransform::Linear => (hi - lo) * T::lit(0.05),
        })
        .collect();
    let grid_evals = starts.len();
    let refined: Vec<(usize, NelderMeadResult<T>)> = chosen
        .par_iter()
        .map(|&i| {
            let mut r = nelder_mead(&g, &starts[i], &step, opts.xtol, opts.ftol, opts.max_evals);
            // restart from the optimum: guards against a collapsed simplex
            let small: Vec<T> = step.iter().map(|&s| s * T::lit(0.1)).collect();
            for _ in 0..2 {
                if r.evals >= opts.max_evals {
                    break;
                }
                let again = nelder_mead(&g, &r.x, &small, opts.xtol, opts.ftol, opts.max_evals - r.evals);
                let improved = again.f < r.f - opts.ftol * (T::one() + r.f.abs());
                let evals = r.evals + again.evals;
                if again.f < r.f {
                    r = again;
                }
                r.evals = evals;
                if !improved {
                    break;
                }
            }
            (i, r)
        })
        .collect();
    let evals = grid_evals + refined.iter().map(|(_, r)| r.evals).sum::<usize>();
    let norm = |u: &[T]| to_x(u).iter().map(|&v| v * v).sum::<T>();
    let mut best: Option<&(usize, NelderMeadResult<T>)> = None;
    for cand in &refined {
        if !cand.1.f.is_finite() {
            continue;
        }
        best = Some(match best {
            None => cand,
            Some(b) => {
                let tol = opts.ftol * (T::one() + b.1.f.abs());
                // ties within ftol go to the smaller parameter vector
                let tie = (cand.1.f - b.1.f).abs() <= tol && norm(&cand.1.x) < norm(&b.1.x);
                if cand.1.f < b.1.f - tol || tie {
                    cand
                } else {
                    b
                }
            }
        });
    }
    best.map(|(i, r)| MultistartResult {
        x: to_x(&r.x),
        f: r.f,
        evals,
        start_index: *i,
    })
}
