use crate::scalar::Real;

use super::QuadError;

const NEWTON_MAX_ITER: usize = 100;

/// Weight function a [`QuadRule`] integrates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// Unit weight on `[-1, 1]`.
    Legendre,
    /// Weight `e^{-r}` on `[0, ∞)`.
    Laguerre,
}

/// Fixed-order Gaussian quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule<T> {
    kind: RuleKind,
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> QuadRule<T> {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wᵢ f(xᵢ)`, i.e. the integral of `f` against the rule's weight.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Legendre rule with `n` points on `[-1, 1]`, nodes ascending.
///
/// Nodes are the roots of `Pₙ`, found by Newton iteration on the three-term
/// recurrence starting from Chebyshev-like guesses.
pub fn gauss_legendre<T: Real>(n: usize) -> Result<QuadRule<T>, QuadError> {
    if n < 1 {
        return Err(QuadError::InvalidOrder(n));
    }
    let nf = T::count(n);
    let half = T::lit(0.5);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let eps = T::epsilon() * T::lit(1024.0);
    // roots are symmetric; compute the non-negative half
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (T::PI() * (T::count(i) + T::lit(0.75)) / (nf + half)).cos();
        let mut deriv = T::one();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre_with_derivative(n, z);
            deriv = dp;
            let dz = p / dp;
            z -= dz;
            if dz.abs() <= eps * z.abs().max(T::one()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(QuadError::RootFinding { order: n, index: i });
        }
        let (_, dp) = legendre_with_derivative(n, z);
        if dp.is_finite() {
            deriv = dp;
        }
        let w = T::lit(2.0) / ((T::one() - z * z) * deriv * deriv);
        nodes[n - 1 - i] = z;
        nodes[i] = -z;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    Ok(QuadRule {
        kind: RuleKind::Legendre,
        nodes,
        weights,
    })
}

/// Gauss–Laguerre rule with `n` points for the weight `e^{-r}` on `[0, ∞)`.
pub fn gauss_laguerre<T: Real>(n: usize) -> Result<QuadRule<T>, QuadError> {
    if n < 1 {
        return Err(QuadError::InvalidOrder(n));
    }
    let nf = T::count(n);
    let mut nodes: Vec<T> = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let eps = T::epsilon() * T::lit(1024.0);
    let mut z = T::zero();
    for i in 0..n {
        // asymptotic initial guesses (alpha = 0)
        z = match i {
            0 => T::lit(3.0) / (T::one() + T::lit(2.4) * nf),
            1 => z + T::lit(15.0) / (T::one() + T::lit(2.5) * nf),
            _ => {
                let ai = T::count(i - 1);
                z + (T::one() + T::lit(2.55) * ai) / (T::lit(1.9) * ai) * (z - nodes[i - 2])
            }
        };
        let mut converged = false;
        let mut p_prev = T::zero();
        let mut dp = T::one();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, pm1) = laguerre_pair(n, z);
            dp = (nf * p - nf * pm1) / z;
            p_prev = pm1;
            let dz = p / dp;
            z -= dz;
            if dz.abs() <= eps * z.abs().max(T::one()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(QuadError::RootFinding { order: n, index: i });
        }
        let (p, pm1) = laguerre_pair(n, z);
        if p.is_finite() {
            dp = (nf * p - nf * pm1) / z;
            p_prev = pm1;
        }
        nodes.push(z);
        weights.push(-T::one() / (nf * dp * p_prev));
    }
    Ok(QuadRule {
        kind: RuleKind::Laguerre,
        nodes,
        weights,
    })
}

/// `(Pₙ(x), Pₙ'(x))` for the Legendre polynomial of degree `n`.
fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 1..n {
        let kf = T::count(k);
        let p2 = ((T::lit(2.0) * kf + T::one()) * x * p1 - kf * p0) / (kf + T::one());
        p0 = p1;
        p1 = p2;
    }
    let nf = T::count(n);
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// `(Lₙ(x), Lₙ₋₁(x))` for ordinary Laguerre polynomials.
fn laguerre_pair<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p_prev = T::zero();
    let mut p = T::one();
    for j in 0..n {
        let jf = T::count(j);
        let next = ((T::lit(2.0) * jf + T::one() - x) * p - jf * p_prev) / (jf + T::one());
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_low_orders() {
        let r = gauss_legendre::<f64>(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - 2.0).abs() < 1e-15);

        let r = gauss_legendre::<f64>(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes()[0] + s).abs() < 1e-15);
        assert!((r.nodes()[1] - s).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-14);
        assert!((r.weights()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn legendre_x6_with_four_points() {
        let r = gauss_legendre::<f64>(4).unwrap();
        let v = r.integrate(|x| x.powi(6));
        assert!((v - 2.0 / 7.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn laguerre_factorials() {
        let r = gauss_laguerre::<f64>(1).unwrap();
        assert!((r.integrate(|_| 1.0) - 1.0).abs() < 1e-14);
        let r = gauss_laguerre::<f64>(3).unwrap();
        assert!((r.integrate(|x| x.powi(5)) - 120.0).abs() < 1e-12);
        let r = gauss_laguerre::<f64>(5).unwrap();
        let v = r.integrate(|x| x.powi(9));
        assert!((v / 362880.0 - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn zero_order_rejected() {
        assert!(matches!(gauss_legendre::<f64>(0), Err(QuadError::InvalidOrder(0))));
        assert!(matches!(gauss_laguerre::<f64>(0), Err(QuadError::InvalidOrder(0))));
    }

    #[test]
    fn weights_positive_and_nodes_sorted() {
        for n in 1..60 {
            for rule in [gauss_legendre::<f64>(n).unwrap(), gauss_laguerre::<f64>(n).unwrap()] {
                assert_eq!(rule.nodes().len(), rule.weights().len());
                assert!(rule.weights().iter().all(|&w| w > 0.0), "n={n} {:?}", rule.kind());
                assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn f32_rules_work() {
        let r = gauss_legendre::<f32>(5).unwrap();
        assert!((r.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-6);
        let r = gauss_laguerre::<f32>(4).unwrap();
        assert!((r.integrate(|x| x * x * x) - 6.0).abs() < 1e-4);
    }
}
