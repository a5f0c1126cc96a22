use std::collections::HashMap;

use crate::scalar::Real;

use super::{ExpKernel, MomentTable, Polynomial, SymError};

/// Default relative tolerance for numerically integrated moments.
pub const DEFAULT_INNER_TOL: f64 = 1e-10;

/// A polynomial prefactor times an exponential kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyExp<T> {
    poly: Polynomial<T>,
    kernel: ExpKernel<T>,
}

impl<T: Real> PolyExp<T> {
    pub fn new(poly: Polynomial<T>, kernel: ExpKernel<T>) -> Result<Self, SymError> {
        kernel.validate()?;
        if poly.nvars() != kernel.dim() {
            return Err(SymError::DimensionMismatch {
                expected: kernel.dim(),
                found: poly.nvars(),
            });
        }
        Ok(PolyExp { poly, kernel })
    }

    /// The bare kernel, prefactor 1.
    pub fn kernel_only(kernel: ExpKernel<T>) -> Result<Self, SymError> {
        Self::new(Polynomial::one(kernel.dim()), kernel)
    }

    pub fn poly(&self) -> &Polynomial<T> {
        &self.poly
    }

    pub fn kernel(&self) -> &ExpKernel<T> {
        &self.kernel
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    pub fn scale(&self, s: T) -> Self {
        PolyExp {
            poly: self.poly.scale(s),
            kernel: self.kernel,
        }
    }

    pub fn eval(&self, x: &[T]) -> T {
        self.poly.eval(x) * self.kernel.eval(x)
    }

    fn canonical_le(&self, other: &Self) -> bool {
        use std::cmp::Ordering::*;
        match self.kernel.canonical_cmp(&other.kernel) {
            Less => true,
            Greater => false,
            Equal => {
                let a = self.poly.terms().map(|(i, c)| (i.clone(), *c));
                let b = other.poly.terms().map(|(i, c)| (i.clone(), *c));
                for ((ia, ca), (ib, cb)) in a.zip(b) {
                    match ia.cmp(&ib) {
                        Less => return true,
                        Greater => return false,
                        Equal => match ca.partial_cmp(&cb) {
                            Some(Less) => return true,
                            Some(Greater) => return false,
                            _ => continue,
                        },
                    }
                }
                self.poly.len() <= other.poly.len()
            }
        }
    }
}

/// A finite sum of [`PolyExp`] terms; terms sharing a kernel are merged.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction<T> {
    dim: usize,
    terms: Vec<PolyExp<T>>,
}

impl<T: Real> WaveFunction<T> {
    pub fn new(terms: Vec<PolyExp<T>>) -> Result<Self, SymError> {
        let dim = terms.first().ok_or(SymError::EmptyWaveFunction)?.dim();
        let mut wf = WaveFunction { dim, terms: Vec::new() };
        for t in terms {
            wf.push(t)?;
        }
        Ok(wf)
    }

    pub fn from_term(term: PolyExp<T>) -> Self {
        let dim = term.dim();
        let mut wf = WaveFunction { dim, terms: Vec::new() };
        wf.push(term).expect("dimension matches itself");
        wf
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[PolyExp<T>] {
        &self.terms
    }

    /// True when every prefactor cancelled.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: PolyExp<T>) -> Result<(), SymError> {
        if term.dim() != self.dim {
            return Err(SymError::DimensionMismatch {
                expected: self.dim,
                found: term.dim(),
            });
        }
        if let Some(pos) = self.terms.iter().position(|t| t.kernel == term.kernel) {
            let merged = &self.terms[pos].poly + &term.poly;
            if merged.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].poly = merged;
            }
        } else if !term.poly.is_zero() {
            self.terms.push(term);
        }
        Ok(())
    }

    pub fn scale(&self, s: T) -> Self {
        WaveFunction {
            dim: self.dim,
            terms: self.terms.iter().map(|t| t.scale(s)).filter(|t| !t.poly.is_zero()).collect(),
        }
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: T, other: &Self) -> Result<Self, SymError> {
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.scale(s))?;
        }
        Ok(out)
    }

    /// `Σ cᵢ·ψᵢ`.
    pub fn linear_combination(parts: &[(T, &WaveFunction<T>)]) -> Result<Self, SymError> {
        let (_, first) = parts.first().ok_or(SymError::EmptyWaveFunction)?;
        let mut out = WaveFunction {
            dim: first.dim,
            terms: Vec::new(),
        };
        for (c, wf) in parts {
            for t in &wf.terms {
                out.push(t.scale(*c))?;
            }
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[T]) -> T {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }
}

impl<T: Real> From<PolyExp<T>> for WaveFunction<T> {
    fn from(t: PolyExp<T>) -> Self {
        WaveFunction::from_term(t)
    }
}

/// Evaluates `L²` inner products of kernel-weighted polynomials.
///
/// Moment tables are cached per product kernel. Within one batch the table
/// degree is fixed before any table is built, so a batch result does not
/// depend on the order in which pairs are listed.
#[derive(Clone)]
pub struct Integrator<T> {
    tol: T,
    cache: HashMap<Vec<u64>, MomentTable<T>>,
}

impl<T: Real> Default for Integrator<T> {
    fn default() -> Self {
        Self::new(T::lit(DEFAULT_INNER_TOL))
    }
}

impl<T: Real> Integrator<T> {
    pub fn new(tol: T) -> Self {
        Integrator {
            tol,
            cache: HashMap::new(),
        }
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    /// `∫ a·b` for every listed pair.
    pub fn pair_values(&mut self, pairs: &[(&PolyExp<T>, &PolyExp<T>)]) -> Result<Vec<T>, SymError> {
        // pass 1: canonical orientation and per-kernel degree requirements
        let mut plan = Vec::with_capacity(pairs.len());
        let mut need: HashMap<Vec<u64>, (super::ProductKernel<T>, Vec<usize>)> = HashMap::new();
        for &(a, b) in pairs {
            if a.dim() != b.dim() {
                return Err(SymError::DimensionMismatch {
                    expected: a.dim(),
                    found: b.dim(),
                });
            }
            let (a, b) = if a.canonical_le(b) { (a, b) } else { (b, a) };
            let pk = a.kernel.product(&b.kernel)?;
            let key = pk.key();
            let req: Vec<usize> = a
                .poly
                .max_exponents()
                .iter()
                .zip(b.poly.max_exponents())
                .map(|(x, y)| x + y)
                .collect();
            let entry = need.entry(key.clone()).or_insert_with(|| (pk, vec![0; a.dim()]));
            for (e, r) in entry.1.iter_mut().zip(&req) {
                *e = (*e).max(*r);
            }
            plan.push((a, b, key));
        }
        // pass 2: build missing tables; sorted keys keep the work order fixed
        let mut keys: Vec<_> = need.keys().cloned().collect();
        keys.sort();
        for key in keys {
            let (pk, req) = &need[&key];
            let fresh = match self.cache.get(&key) {
                Some(t) => !t.covers(req),
                None => true,
            };
            if fresh {
                let table = MomentTable::compute(pk, req, self.tol)?;
                self.cache.insert(key, table);
            }
        }
        // pass 3: contract
        let mut idx = Vec::new();
        Ok(plan
            .iter()
            .map(|(a, b, key)| contract(a.poly(), b.poly(), &self.cache[key], &mut idx))
            .collect())
    }

    /// `⟨f, g⟩ = ∫ f·g`. Exactly symmetric in its arguments.
    pub fn inner(&mut self, f: &WaveFunction<T>, g: &WaveFunction<T>) -> Result<T, SymError> {
        Ok(self.gram(&[f], &[g])?[0][0])
    }

    /// Matrix of inner products `⟨fᵢ, gⱼ⟩`, evaluated as one batch.
    pub fn gram(&mut self, fs: &[&WaveFunction<T>], gs: &[&WaveFunction<T>]) -> Result<Vec<Vec<T>>, SymError> {
        let pairs: Vec<_> = fs.iter().flat_map(|f| gs.iter().map(move |g| (*f, *g))).collect();
        let flat = self.inner_many(&pairs)?;
        Ok(flat.chunks(gs.len().max(1)).map(|c| c.to_vec()).collect())
    }

    /// `⟨f, g⟩` for each listed pair, evaluated as one batch.
    pub fn inner_many(&mut self, list: &[(&WaveFunction<T>, &WaveFunction<T>)]) -> Result<Vec<T>, SymError> {
        let mut pairs = Vec::new();
        let mut shape = Vec::with_capacity(list.len());
        for (f, g) in list {
            if f.dim != g.dim {
                return Err(SymError::DimensionMismatch {
                    expected: f.dim,
                    found: g.dim,
                });
            }
            shape.push(f.terms.len() * g.terms.len());
            for a in &f.terms {
                for b in &g.terms {
                    pairs.push((a, b));
                }
            }
        }
        let vals = self.pair_values(&pairs)?;
        let mut it = vals.into_iter();
        Ok(shape
            .into_iter()
            .map(|n| {
                let mut part: Vec<T> = it.by_ref().take(n).collect();
                // order-free summation makes ⟨f,g⟩ and ⟨g,f⟩ bit-identical
                part.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
                part.into_iter().sum()
            })
            .collect())
    }
}

fn contract<T: Real>(p: &Polynomial<T>, q: &Polynomial<T>, table: &MomentTable<T>, idx: &mut Vec<u16>) -> T {
    let mut total = T::zero();
    for (ia, &ca) in p.terms() {
        let mut row = T::zero();
        for (ib, &cb) in q.terms() {
            idx.clear();
            idx.extend(ia.exponents().iter().zip(ib.exponents()).map(|(x, y)| x + y));
            let m = table.get(idx);
            if m != T::zero() {
                row += cb * m;
            }
        }
        total += ca * row;
    }
    total
}

/// `⟨f, g⟩` with a fresh integrator at the default tolerance.
pub fn inner_product<T: Real>(f: &WaveFunction<T>, g: &WaveFunction<T>) -> Result<T, SymError> {
    Integrator::default().inner(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gauss1(omega: f64) -> ExpKernel<f64> {
        ExpKernel::iso(omega, 1).unwrap()
    }

    #[test]
    fn gaussian_norm() {
        let f = WaveFunction::from(PolyExp::kernel_only(gauss1(1.0)).unwrap());
        assert!((inner_product(&f, &f).unwrap() - PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn parity_vanishes() {
        let f = WaveFunction::from(PolyExp::new(Polynomial::var(1, 0), gauss1(1.0)).unwrap());
        let g = WaveFunction::from(PolyExp::kernel_only(gauss1(1.0)).unwrap());
        assert_eq!(inner_product(&f, &g).unwrap(), 0.0);
    }

    #[test]
    fn six_dimensional_ground_state_norm() {
        let f = WaveFunction::from(PolyExp::kernel_only(ExpKernel::iso(1.0, 6).unwrap()).unwrap());
        let v = inner_product(&f, &f).unwrap();
        assert!((v / PI.powi(3) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn merging_same_kernel() {
        let k = gauss1(1.3);
        let a = PolyExp::new(Polynomial::monomial(&[2], 1.0), k).unwrap();
        let b = PolyExp::new(Polynomial::monomial(&[2], -1.0), k).unwrap();
        let wf = WaveFunction::new(vec![a.clone(), b]).unwrap();
        assert!(wf.is_zero());
        let c = PolyExp::kernel_only(gauss1(0.7)).unwrap();
        let wf = WaveFunction::new(vec![a.clone(), c, a]).unwrap();
        assert_eq!(wf.terms().len(), 2);
        assert_eq!(wf.terms()[0].poly().coeff(&[2]), 2.0);
    }

    #[test]
    fn unsupported_pair_is_an_error() {
        let f = WaveFunction::from(PolyExp::kernel_only(ExpKernel::iso(1.0, 2).unwrap()).unwrap());
        let g = WaveFunction::from(PolyExp::kernel_only(gauss1(1.0)).unwrap());
        assert!(inner_product(&f, &g).is_err());
    }

    #[test]
    fn quartic_pair_against_direct_quadrature() {
        let k1 = ExpKernel::quartic(1.1, 0.29).unwrap();
        let k2 = ExpKernel::quartic(0.4, 0.1).unwrap();
        let p = Polynomial::from_terms(1, [(vec![0], 1.0), (vec![4], -0.3)]).unwrap();
        let f = WaveFunction::from(PolyExp::new(p.clone(), k1).unwrap());
        let g = WaveFunction::from(PolyExp::new(Polynomial::monomial(&[2], 1.0), k2).unwrap());
        let v = inner_product(&f, &g).unwrap();
        let direct = crate::quad::integrate_1d(
            |x: f64| p.eval(&[x]) * x * x * (-(1.5 * x * x / 2.0) - 0.39 * x.powi(4) / 4.0).exp(),
            crate::quad::Domain::Real,
            1e-12,
        )
        .unwrap();
        assert!((v / direct - 1.0).abs() < 1e-9, "{v} {direct}");
    }
}
