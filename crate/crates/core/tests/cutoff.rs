use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use varspec::cutoff::*;
use varspec::quad::{gauss_laguerre, gauss_legendre};

#[test]
fn pairing_is_a_bijection() {
    let mut seen = std::collections::HashSet::new();
    for l in 0..=50 {
        for n in 0..=50 {
            let a = pairing(l, n);
            assert_eq!(unpairing(a), (l, n));
            assert!(seen.insert(a));
        }
    }
    // every a ≤ 20 reached from the forward map with l + n ≤ 5
    for a in 0..=20 {
        let (l, n) = unpairing(a);
        assert!(l + n <= 5);
        assert_eq!(pairing(l, n), a);
    }
}

#[test]
fn radial_basis_orthonormal() {
    for n in 0..=40 {
        for m in 0..=n {
            let r = radial_integrals::<f64>(n, m).unwrap();
            let expect = if n == m { 1.0 } else { 0.0 };
            assert!((r.overlap - expect).abs() < 1e-10, "({n},{m}): {}", r.overlap);
        }
    }
}

#[test]
fn radial_basis_orthonormal_by_direct_product() {
    // φ evaluated with its exponential, weight r⁵ folded into a plain
    // Laguerre rule with twice the nodes
    let rb = RadialBasis::new(12);
    let rule = gauss_laguerre::<f64>(60).unwrap();
    for n in 0..=12 {
        for m in 0..=12 {
            let s: f64 = rule
                .nodes()
                .iter()
                .zip(rule.weights())
                .map(|(&x, &w)| w * x.exp() * rb.eval(n, x) * rb.eval(m, x) * x.powi(5))
                .sum();
            assert!((s - if n == m { 1.0 } else { 0.0 }).abs() < 1e-10);
        }
    }
}

#[test]
fn angular_basis_orthonormal() {
    let ab = AngularBasis::new(40);
    let rule = gauss_legendre::<f64>(45).unwrap();
    let vals: Vec<Vec<f64>> = rule.nodes().iter().map(|&u| ab.eval_all(u)).collect();
    for l in 0..=40 {
        for k in 0..=l {
            let s: f64 = vals.iter().zip(rule.weights()).map(|(p, &w)| w * p[l] * p[k]).sum();
            assert!((s - if l == k { 1.0 } else { 0.0 }).abs() < 1e-12, "({l},{k})");
            let su: f64 = vals
                .iter()
                .zip(rule.nodes().iter().zip(rule.weights()))
                .map(|(p, (&u, &w))| w * p[l] * u * p[k])
                .sum();
            assert!((su - AngularBasis::u_coupling::<f64>(l, k)).abs() < 1e-12);
        }
    }
    assert!((AngularBasis::one_minus_u::<f64>(0, 0) - 1.0).abs() < 1e-15);
}

#[test]
fn radial_derivative_matches_finite_difference() {
    let rb = RadialBasis::new(10);
    let h = 1e-5f64;
    for n in 0..=10 {
        for &r in &[0.3f64, 1.7, 6.0, 15.0] {
            let fd = (rb.eval(n, r + h) - rb.eval(n, r - h)) / (2.0 * h);
            assert!((rb.deriv(n, r) - fd).abs() < 1e-7 * (1.0 + fd.abs()));
        }
    }
}

#[test]
fn matrix_elements_symmetric() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..200 {
        let (l, n, l2, n2) = (rng.gen_range(0..12), rng.gen_range(0..12), rng.gen_range(0..12), rng.gen_range(0..12));
        for s in [SignConvention::AsWritten, SignConvention::Repulsive] {
            let a = matrix_element::<f64>(l, n, l2, n2, s).unwrap();
            let b = matrix_element::<f64>(l2, n2, l, n, s).unwrap();
            assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()));
        }
        if l.abs_diff(l2) > 1 {
            assert_eq!(matrix_element::<f64>(l, n, l2, n2, SignConvention::Repulsive).unwrap(), 0.0);
        }
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `φₙ` from the explicit Laguerre sum.
fn phi(n: usize, r: f64) -> f64 {
    let mut s = 0.0;
    let mut fact = 1.0;
    for i in 0..=n {
        if i > 0 {
            fact *= i as f64;
        }
        s += (-1f64).powi(i as i32) * binom(n + 5, n - i) * r.powi(i as i32) / fact;
    }
    let norm: f64 = (1..=5).map(|k| (n + k) as f64).product::<f64>().sqrt().recip();
    norm * s * (-r / 2.0).exp()
}

/// `P̃ₗ` from the explicit power sum.
fn legendre(l: usize, u: f64) -> f64 {
    let mut s = 0.0;
    for k in 0..=l / 2 {
        s += (-1f64).powi(k as i32) * binom(l, k) * binom(2 * l - 2 * k, l) * u.powi((l - 2 * k) as i32);
    }
    s / 2f64.powi(l as i32) * ((2 * l + 1) as f64 / 2.0).sqrt()
}

fn d1(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

fn d2(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

/// `⟨f_{l'n'}, H f_{ln}⟩` with `H` applied by finite differences in
/// `(r, θ)` and integrated on a tensor Gauss–Legendre grid over
/// `[0, 120] × [0, π]` with measure `r⁵ sin θ`.
fn oracle_element(l: usize, n: usize, l2: usize, n2: usize, sign: f64) -> f64 {
    let f = |r: f64, t: f64| phi(n, r) * legendre(l, t.cos());
    let g = |r: f64, t: f64| phi(n2, r) * legendre(l2, t.cos());
    let gl = gauss_legendre::<f64>(20).unwrap();
    let gt = gauss_legendre::<f64>(40).unwrap();
    let h = 1e-3;
    let (panels, width) = (60, 2.0);
    let mut total = 0.0;
    for p in 0..panels {
        let a = p as f64 * width;
        for (&xr, &wr) in gl.nodes().iter().zip(gl.weights()) {
            let r = a + (xr + 1.0) * width / 2.0;
            let wr = wr * width / 2.0;
            for (&xt, &wt) in gt.nodes().iter().zip(gt.weights()) {
                let t = (xt + 1.0) * std::f64::consts::PI / 2.0;
                let wt = wt * std::f64::consts::PI / 2.0;
                let fr = |x: f64| f(x, t);
                let ft = |y: f64| f(r, y);
                let radial = -(d2(&fr, r, h) + 5.0 / r * d1(&fr, r, h));
                let angular = d2(&ft, t, h) + t.cos() / t.sin() * d1(&ft, t, h);
                let pot = r.powi(4) / 8.0 * (1.0 - t.cos()) * f(r, t);
                let hf = radial + sign * 16.0 / (r * r) * angular + pot;
                total += wr * wt * g(r, t) * hf * r.powi(5) * t.sin();
            }
        }
    }
    total
}

#[test]
fn spot_entries_match_tensor_quadrature() {
    let m = assemble::<f64>(30, SignConvention::AsWritten).unwrap();
    let rep = assemble::<f64>(30, SignConvention::Repulsive).unwrap();
    let mut rng = StdRng::seed_from_u64(29);
    for _ in 0..12 {
        let (a, b) = (rng.gen_range(0..=30), rng.gen_range(0..=30));
        let (l, n) = unpairing(a);
        let (l2, n2) = unpairing(b);
        // as written: the operator carries + in front of the Legendre term
        let o = oracle_element(l, n, l2, n2, 1.0);
        assert!((m.get(a, b) - o).abs() < 1e-7, "({a},{b}): {} vs {o}", m.get(a, b));
        let o = oracle_element(l, n, l2, n2, -1.0);
        assert!((rep.get(a, b) - o).abs() < 1e-7, "({a},{b}): {} vs {o}", rep.get(a, b));
    }
}

#[test]
fn consecutive_truncations_interlace() {
    let full = assemble::<f64>(80, SignConvention::Repulsive).unwrap();
    let list: Vec<usize> = (4..=80).collect();
    let table = convergence_scan::<f64>(&list, 5, SignConvention::Repulsive).unwrap();
    for w in table.rows.windows(2) {
        for c in 0..5 {
            assert!(w[1].1[c] <= w[0].1[c] + MONOTONE_SLACK);
        }
    }
    let direct = lowest_eigenvalues(&full, 5).unwrap();
    assert_eq!(table.last().unwrap().1, direct);
    let mut buf = Vec::new();
    table.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("N,E0,E1,E2,E3,E4\n4,"));
    assert_eq!(text.lines().count(), 78);
}

#[test]
fn monotonicity_violation_is_reported() {
    let table = ConvergenceTable {
        k: 1,
        sign: SignConvention::Repulsive,
        rows: vec![(10, vec![5.0f64]), (20, vec![5.1])],
    };
    assert!(matches!(check_monotone(&table), Err(CutoffError::NotMonotone { column: 0, .. })));
}

#[test]
fn repulsive_sign_reproduces_ground_level() {
    let sel = select_sign_convention::<f64>(100, 4.23).unwrap();
    assert_eq!(sel.chosen, SignConvention::Repulsive);
    assert!(sel.e0_as_written < 0.0);
    assert!(sel.e0_repulsive > 4.23);
}
