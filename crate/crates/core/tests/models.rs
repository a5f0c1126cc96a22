use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;
use varspec::engine::{AnsatzFamily, FrozenSet, Method, SolverConfig};
use varspec::models::*;
use varspec::symcore::{expectations, rayleigh, Integrator};

#[test]
fn su2_analytic_matches_symbolic_moments() {
    let (h, fam) = su2_family::<f64>(2).unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..10 {
        let w = rng.gen_range(0.5..3.0);
        let psi = fam.basis(0, &[w]).unwrap();
        let (e, r2) = expectations(&psi, &h, &mut Integrator::default()).unwrap().variance();
        let m = su2_analytic(2, w).unwrap();
        assert!((e - m.h_mean).abs() <= 1e-8 * m.h_mean.abs(), "ω={w}: {e} vs {}", m.h_mean);
        assert!((r2 - m.r_sq).abs() <= 1e-8 * m.r_sq.abs(), "ω={w}: {r2} vs {}", m.r_sq);
    }
}

#[test]
fn su2_analytic_variance_identity() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let d = rng.gen_range(1..40usize);
        let w: f64 = rng.gen_range(0.3..5.0);
        let m = su2_analytic(d, w).unwrap();
        let gap = m.h2_mean - m.h_mean * m.h_mean - m.r_sq;
        assert!(gap.abs() <= 1e-10 * m.h2_mean.max(1.0), "d={d} ω={w}: {gap}");
    }
}

#[test]
fn su2_analytic_examples() {
    let m = su2_analytic(2, 1.128f64).unwrap();
    assert!((m.h_mean - 4.563).abs() < 5e-4);
    assert!(su2_analytic(2, -1.0f64).is_err());
}

#[test]
fn ground_closed_form_solves_characteristic_equation() {
    for d in 2..=300 {
        let g = su2_ground_closed_form::<f64>(d).unwrap();
        assert!(g.char_residual.abs() < 1e-9, "d={d}: {}", g.char_residual);
    }
}

#[test]
fn ground_closed_form_is_scan_minimum() {
    for d in [2usize, 3, 4, 10, 100, 300] {
        let g = su2_ground_closed_form::<f64>(d).unwrap();
        let at = su2_analytic(d, g.omega_min).unwrap();
        assert!((at.h_mean - g.e0).abs() < 1e-10 * g.e0);
        assert!((at.r_sq - g.r0_sq).abs() < 1e-9 * g.r0_sq);
        for k in 1..=50 {
            let dw = g.omega_min * 1e-3 * k as f64;
            for w in [g.omega_min - dw, g.omega_min + dw] {
                assert!(su2_analytic(d, w).unwrap().r_sq > g.r0_sq);
            }
        }
    }
}

#[test]
fn asymptotic_ratios_approach_one() {
    let mut prev = f64::INFINITY;
    for d in [10usize, 100, 1000, 10_000] {
        let g = su2_ground_closed_form::<f64>(d).unwrap();
        let a = su2_large_d_asymptotics::<f64>(d).unwrap();
        let dev = [g.omega_min / a.omega_asym, g.e0 / a.e0_asym]
            .iter()
            .map(|r| (r - 1.0).abs())
            .fold(0.0f64, f64::max);
        assert!(dev < prev);
        prev = dev;
        let (e, r2) = a.rescaled(d);
        assert!((r2 - 2.25 / (d * d) as f64).abs() < 1e-12 * r2);
        assert!((e - 2.25).abs() < 1e-12);
    }
    assert!(prev < 0.01);
}

/// The d^{5/3} terms of R² cancel at the optimum, leaving (9/8)d^{2/3}:
/// half of the (9/4)d^{2/3} asymptote.
#[test]
fn residual_asymptote_is_off_by_two() {
    let d = 10_000usize;
    let g = su2_ground_closed_form::<f64>(d).unwrap();
    let a = su2_large_d_asymptotics::<f64>(d).unwrap();
    assert!((g.r0_sq / a.r0_sq_asym - 0.5).abs() < 1e-3);
    assert!((g.r0_sq / (1.125 * (d as f64).powf(2.0 / 3.0)) - 1.0).abs() < 1e-3);
}

#[test]
fn excited_closed_form_matches_symbolic_at_d2() {
    let (h, fam) = su2_family::<f64>(2).unwrap();
    let g = su2_ground_closed_form::<f64>(2).unwrap();
    let psi0 = fam.basis(0, &[g.omega_min]).unwrap();
    let frozen = FrozenSet::from_states(vec![psi0], None, 1e-10).unwrap();
    let cfg = SolverConfig::new(Method::Method2);
    for w1 in [0.6, 1.0, 1.14, 1.32, 2.5] {
        let o = varspec::engine::orthogonalize_m2(1, &[w1], &fam, &frozen, &cfg).unwrap();
        let (numer, norm) = su2_excited_terms(2, g.omega_min, w1);
        let a = (std::f64::consts::PI / w1).powi(3);
        assert!((o.norm_sq - norm * a).abs() < 1e-10 * o.norm_sq, "ω₁={w1}");
        let e = rayleigh(&o.state, &h).unwrap();
        assert!((e - numer / norm).abs() < 1e-10 * e, "ω₁={w1}");
    }
}

#[test]
fn excited_above_ground_for_tabulated_d() {
    for d in [2usize, 3, 4, 10, 100, 300] {
        let g = su2_ground_closed_form::<f64>(d).unwrap();
        let e = su2_excited_closed_form::<f64>(d).unwrap();
        assert!(e.e1 - g.rescaled().0 > 0.0, "d={d}");
        assert!((e.e1_unrescaled * (d as f64).powf(-4.0 / 3.0) - e.e1).abs() < 1e-12 * e.e1);
    }
}

#[test]
fn su2_potential_non_negative() {
    let mut rng = StdRng::seed_from_u64(3);
    for d in [2usize, 3] {
        let v = su2_potential::<f64>(d);
        for _ in 0..1000 {
            let q: Vec<f64> = (0..3 * d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            assert!(v.eval(&q) >= -1e-12);
        }
    }
}

#[test]
fn su2_potential_is_cross_product_sum() {
    let mut rng = StdRng::seed_from_u64(5);
    let v = su2_potential::<f64>(3);
    for _ in 0..100 {
        let q: Vec<f64> = (0..9).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut direct = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                let (a, b) = (&q[3 * i..3 * i + 3], &q[3 * j..3 * j + 3]);
                let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
                direct += c.iter().map(|x| x * x).sum::<f64>();
            }
        }
        assert!((v.eval(&q) - direct).abs() < 1e-10 * (1.0 + direct));
    }
}

#[test]
fn su2_family_rejects_small_d() {
    assert!(su2_family::<f64>(1).is_err());
    assert!(su2_ground_closed_form::<f64>(1).is_err());
}

#[test]
fn rescaled_hamiltonian_scales_energy() {
    let h = su2_hamiltonian::<f64>(2, true);
    let psi = Su2Family { d: 2 }.basis(0, &[1.2]).unwrap();
    let e = rayleigh(&psi, &h).unwrap();
    let m = su2_analytic(2, 1.2f64).unwrap();
    assert!((e - m.h_mean * 2f64.powf(-4.0 / 3.0)).abs() < 1e-10);
}

fn check_sector(fam: &dyn AnsatzFamily<f64>, signs: [f64; 3], levels: usize, rng: &mut StdRng) {
    for level in 0..levels {
        let w = [rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0), rng.gen_range(0.0..1.0)];
        let f = fam.basis(level, &w).unwrap();
        for _ in 0..100 {
            let (x, y) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let v = f.eval(&[x, y]);
            assert_eq!(f.eval(&[-x, y]), signs[0] * v);
            assert_eq!(f.eval(&[x, -y]), signs[1] * v);
            assert_eq!(f.eval(&[y, x]), signs[2] * v);
        }
    }
}

#[test]
fn x2y2_sectors_have_their_parities() {
    let mut rng = StdRng::seed_from_u64(13);
    for sector in [C4vSector::Eee, C4vSector::Eeo] {
        let fam = x2y2_family(sector).unwrap();
        let s = fam.sector.signs().map(f64::from);
        check_sector(&fam, s, 4, &mut rng);
    }
}

#[test]
fn anharmonic_sectors_have_their_parities() {
    let mut rng = StdRng::seed_from_u64(17);
    for (par, s) in [(Parity::Even, 1.0), (Parity::Odd, -1.0)] {
        for basis in [AnharmonicBasis::Gn, AnharmonicBasis::Gn2] {
            let fam = anharmonic_family(par, basis);
            for level in 0..4 {
                let w = [rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0)];
                let f = AnsatzFamily::<f64>::basis(&fam, level, &w[..AnsatzFamily::<f64>::param_count(&fam)]).unwrap();
                for _ in 0..100 {
                    let x = rng.gen_range(-3.0..3.0);
                    assert_eq!(f.eval(&[-x]), s * f.eval(&[x]));
                }
            }
        }
    }
}

#[test]
fn x2y2_density_is_swap_symmetric() {
    let mut rng = StdRng::seed_from_u64(19);
    let rho = x2y2_density(&[0.4f64, 0.2, 0.13]).unwrap();
    for _ in 0..100 {
        let (x, y) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        assert_eq!(rho.eval(&[x, y]), rho.eval(&[y, x]));
    }
}

#[test]
fn x2y2_density_ground_rayleigh() {
    let rho = x2y2_density(&[0.385f64, 0.190, 0.126]).unwrap();
    let e = rayleigh(&rho, &x2y2_hamiltonian()).unwrap();
    assert!((e - 1.109).abs() < 2e-3, "{e}");
}
