use crate::scalar::Real;

use super::QuadError;

/// Integration domain for [`integrate_1d`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// The whole real line.
    Real,
    /// `[0, ∞)`.
    HalfLine,
}

/// How the per-component error target is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorTarget {
    /// `|error| ≤ tol·(1 + |value|)`.
    Mixed,
    /// `|error| ≤ tol·|value|`; for integrands of fixed sign.
    Relative,
}

/// Default cap on the number of live subintervals.
pub const DEFAULT_MAX_SEGMENTS: usize = 4000;
const INITIAL_SEGMENTS: usize = 8;

// Kronrod 15-point abscissae; odd indices are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Options for the vector-valued adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions<T> {
    pub tol: T,
    /// Length scale `s` of the map `x = s·t/(1−t)`.
    pub scale: T,
    pub target: ErrorTarget,
    pub max_segments: usize,
}

impl<T: Real> AdaptiveOptions<T> {
    pub fn new(tol: T) -> Self {
        Self {
            tol,
            scale: T::one(),
            target: ErrorTarget::Mixed,
            max_segments: DEFAULT_MAX_SEGMENTS,
        }
    }

    pub fn with_scale(mut self, scale: T) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_target(mut self, target: ErrorTarget) -> Self {
        self.target = target;
        self
    }
}

/// Integrates a smooth, Gaussian-decaying `f` over `domain`.
///
/// Each half line is mapped to `[0, 1)` with `x = t/(1−t)` and integrated by
/// globally adaptive bisection with a 7/15 Gauss–Kronrod pair. The returned
/// value satisfies the estimated bound `|error| ≤ tol·(1 + |value|)`.
pub fn integrate_1d<T: Real, F>(f: F, domain: Domain, tol: T) -> Result<T, QuadError>
where
    F: Fn(T) -> T,
{
    let opts = AdaptiveOptions::new(tol);
    let out = integrate_1d_vec(|x, acc: &mut [T]| acc[0] += f(x), 1, domain, &opts)?;
    Ok(out[0])
}

/// Vector-valued variant of [`integrate_1d`].
///
/// `f(x, acc)` must *add* the `len` component values at `x` into `acc`.
/// All components share the same subdivision; refinement continues until
/// every component meets its target.
pub fn integrate_1d_vec<T: Real, F>(
    f: F,
    len: usize,
    domain: Domain,
    opts: &AdaptiveOptions<T>,
) -> Result<Vec<T>, QuadError>
where
    F: Fn(T, &mut [T]),
{
    if !(opts.tol > T::zero()) || !opts.tol.is_finite() {
        return Err(QuadError::InvalidTolerance(opts.tol.as_f64()));
    }
    if !(opts.scale > T::zero()) {
        return Err(QuadError::InvalidTolerance(opts.scale.as_f64()));
    }
    let s = opts.scale;
    // Pull back to t ∈ [0,1): x = s t/(1−t), dx = s/(1−t)² dt.
    let mapped = |t: T, acc: &mut [T], scratch: &mut [T]| {
        let one_m = T::one() - t;
        let x = s * t / one_m;
        let jac = s / (one_m * one_m);
        scratch.iter_mut().for_each(|v| *v = T::zero());
        f(x, scratch);
        if domain == Domain::Real {
            f(-x, scratch);
        }
        for (a, &v) in acc.iter_mut().zip(scratch.iter()) {
            *a += jac * v;
        }
    };
    adaptive_unit_interval(mapped, len, opts)
}

struct Segment<T> {
    a: T,
    b: T,
    value: Vec<T>,
    error: Vec<T>,
}

fn adaptive_unit_interval<T: Real, F>(
    g: F,
    len: usize,
    opts: &AdaptiveOptions<T>,
) -> Result<Vec<T>, QuadError>
where
    F: Fn(T, &mut [T], &mut [T]),
{
    let mut scratch = vec![T::zero(); len];
    let mut eval_segment = |a: T, b: T| -> Segment<T> {
        let (value, error) = kronrod15(&g, a, b, len, &mut scratch);
        Segment { a, b, value, error }
    };

    let mut segments: Vec<Segment<T>> = (0..INITIAL_SEGMENTS)
        .map(|i| {
            let a = T::count(i) / T::count(INITIAL_SEGMENTS);
            let b = T::count(i + 1) / T::count(INITIAL_SEGMENTS);
            eval_segment(a, b)
        })
        .collect();

    let floor = T::epsilon() * T::lit(50.0);
    loop {
        let mut total = vec![T::zero(); len];
        let mut total_err = vec![T::zero(); len];
        for seg in &segments {
            for k in 0..len {
                total[k] += seg.value[k];
                total_err[k] += seg.error[k];
            }
        }
        let targets: Vec<T> = total
            .iter()
            .map(|v| {
                let t = match opts.target {
                    ErrorTarget::Mixed => opts.tol * (T::one() + v.abs()),
                    ErrorTarget::Relative => opts.tol * v.abs(),
                };
                // never ask for better than a few ulps of the value itself
                t.max(floor * v.abs()).max(T::min_positive_value())
            })
            .collect();
        let done = total_err.iter().zip(&targets).all(|(e, t)| *e <= *t);
        if done {
            return Ok(total);
        }
        if segments.len() >= opts.max_segments {
            let (worst, _) = worst_component(&total_err, &targets);
            return Err(QuadError::BudgetExceeded {
                estimate: total[worst].as_f64(),
                error: total_err[worst].as_f64(),
            });
        }
        // bisect the segment with the largest normalized error; ties keep the lowest index
        let mut pick = 0;
        let mut pick_score = T::neg_infinity();
        for (i, seg) in segments.iter().enumerate() {
            let score = seg
                .error
                .iter()
                .zip(&targets)
                .map(|(e, t)| *e / *t)
                .fold(T::zero(), T::max);
            if score > pick_score {
                pick = i;
                pick_score = score;
            }
        }
        let seg = segments.swap_remove(pick);
        let mid = (seg.a + seg.b) * T::lit(0.5);
        if !(mid > seg.a && mid < seg.b) {
            let (worst, _) = worst_component(&total_err, &targets);
            return Err(QuadError::BudgetExceeded {
                estimate: total[worst].as_f64(),
                error: total_err[worst].as_f64(),
            });
        }
        let left = eval_segment(seg.a, mid);
        let right = eval_segment(mid, seg.b);
        segments.push(left);
        segments.push(right);
        // keep the summation order a function of geometry only
        segments.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(std::cmp::Ordering::Equal));
    }
}

fn worst_component<T: Real>(err: &[T], targets: &[T]) -> (usize, T) {
    err.iter()
        .zip(targets)
        .map(|(e, t)| *e / *t)
        .enumerate()
        .fold((0, T::neg_infinity()), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc })
}

fn kronrod15<T: Real, F>(g: &F, a: T, b: T, len: usize, scratch: &mut [T]) -> (Vec<T>, Vec<T>)
where
    F: Fn(T, &mut [T], &mut [T]),
{
    let center = (a + b) * T::lit(0.5);
    let half = (b - a) * T::lit(0.5);
    let mut kron = vec![T::zero(); len];
    let mut gauss = vec![T::zero(); len];
    let mut fx = vec![T::zero(); len];
    for j in 0..8 {
        let offsets: &[T] = if j == 7 {
            &[T::zero()]
        } else {
            &[-T::lit(XGK[j]), T::lit(XGK[j])]
        };
        for &o in offsets {
            fx.iter_mut().for_each(|v| *v = T::zero());
            g(center + half * o, &mut fx, scratch);
            let wk = T::lit(WGK[j]);
            for k in 0..len {
                kron[k] += wk * fx[k];
            }
            if j % 2 == 1 {
                let wg = T::lit(WG[j / 2]);
                for k in 0..len {
                    gauss[k] += wg * fx[k];
                }
            }
        }
    }
    let value: Vec<T> = kron.iter().map(|&v| v * half).collect();
    let error = kron
        .iter()
        .zip(&gauss)
        .map(|(&k, &g)| ((k - g) * half).abs())
        .collect();
    (value, error)
}
