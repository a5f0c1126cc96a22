use varspec::engine::{
    error_bound_check, orthogonalize_m1, orthogonalize_m2, solve_level, solve_tower, AnsatzFamily, FrozenSet, Method,
    Objective, SolverConfig, SpectrumEstimate,
};
use varspec::linalg::{solve_linear, DenseMatrix};
use varspec::models::{anharmonic_family, anharmonic_hamiltonian, su2_c10, AnharmonicBasis, Parity, Su2Family};
use varspec::symcore::{
    gaussian_moment, ExpKernel, HamiltonianSpec, Integrator, PolyExp, Polynomial, SymError, WaveFunction,
};

use proptest::prelude::*;

/// `xⁿ e^{-ωx²/2}` for the harmonic oscillator test Hamiltonian.
struct GaussianFamily;

impl AnsatzFamily<f64> for GaussianFamily {
    fn dim(&self) -> usize {
        1
    }
    fn param_count(&self) -> usize {
        1
    }
    fn basis(&self, level: usize, params: &[f64]) -> Result<WaveFunction<f64>, SymError> {
        let p = Polynomial::monomial(&[level as u16], 1.0);
        Ok(PolyExp::new(p, ExpKernel::iso(params[0], 1)?)?.into())
    }
    fn param_box(&self) -> Vec<(f64, f64)> {
        vec![(0.01, 10.0)]
    }
    fn name(&self) -> String {
        "gaussian".into()
    }
}

fn max_pairwise_overlap(tower: &[SpectrumEstimate<f64>]) -> f64 {
    let mut integ = Integrator::new(1e-10);
    let mut worst = 0.0f64;
    for i in 0..tower.len() {
        for j in 0..i {
            let o = integ.inner(&tower[i].state, &tower[j].state).unwrap();
            worst = worst.max(o.abs() / (tower[i].norm_sq * tower[j].norm_sq).sqrt());
        }
    }
    worst
}

#[test]
fn harmonic_ground_state_is_exact() {
    let h = HamiltonianSpec::<f64>::harmonic();
    // R grows linearly in |ω − 1|, so the simplex tolerance bounds it.
    let mut cfg = SolverConfig::new(Method::Method1);
    cfg.xtol = 1e-10;
    cfg.ftol = 1e-16;
    let est = solve_level(0, &h, &GaussianFamily, &[], &cfg).unwrap();
    assert!((est.energy - 1.0).abs() < 1e-8, "E = {}", est.energy);
    assert!(est.residual < 1e-8, "R = {}", est.residual);
    assert!((est.omega[0] - 1.0).abs() < 1e-3, "ω = {}", est.omega[0]);
}

#[test]
fn harmonic_tower_finds_exact_levels() {
    let h = HamiltonianSpec::<f64>::harmonic();
    let tower = solve_tower(3, &h, &GaussianFamily, &SolverConfig::new(Method::Method2)).unwrap();
    for (n, est) in tower.iter().enumerate() {
        assert!((est.energy - (2 * n + 1) as f64).abs() < 1e-6, "level {n}: {}", est.energy);
        assert!(est.residual < 1e-4);
    }
}

#[test]
fn m1_level_one_coefficient_matches_moment_ratio() {
    let fam = anharmonic_family(Parity::Even, AnharmonicBasis::Gn);
    let (w0, w1) = (1.54f64, 1.77);
    let psi0 = AnsatzFamily::<f64>::basis(&fam, 0, &[w0]).unwrap();
    let frozen = FrozenSet::from_states(vec![psi0.clone()], None, 1e-10).unwrap();
    let cfg = SolverConfig::new(Method::Method1);
    let o = orthogonalize_m1(1, &[w1], &fam, &frozen, &cfg).unwrap();
    let a = (w0 + w1) / 2.0;
    let expect = -gaussian_moment(2, a).unwrap() / gaussian_moment(0, a).unwrap();
    assert!((o.coeffs[0] - expect).abs() < 1e-12 * expect.abs());
    let ov = Integrator::new(1e-10).inner(&psi0, &o.state).unwrap();
    assert!(ov.abs() < 1e-12);
}

#[test]
fn m1_level_two_is_orthogonal_to_both_frozen() {
    let fam = anharmonic_family(Parity::Even, AnharmonicBasis::Gn);
    let h = anharmonic_hamiltonian::<f64>();
    let cfg = SolverConfig::new(Method::Method1);
    let tower = solve_tower(2, &h, &fam, &cfg).unwrap();
    let frozen = FrozenSet::new(&tower, None, 1e-10).unwrap();
    let o = orthogonalize_m1(2, &[2.1], &fam, &frozen, &cfg).unwrap();
    let mut integ = Integrator::new(1e-10);
    for est in &tower {
        let ov = integ.inner(&est.state, &o.state).unwrap();
        assert!(ov.abs() / (est.norm_sq * o.norm_sq).sqrt() < 1e-10);
    }
}

#[test]
fn m2_coefficient_zero_for_orthogonal_candidate() {
    let fam = anharmonic_family(Parity::Even, AnharmonicBasis::Gn);
    let h = HamiltonianSpec::<f64>::harmonic();
    // x²e^{-x²/2} − ½e^{-x²/2} and e^{-x²/2} are orthogonal.
    let psi0 = WaveFunction::linear_combination(&[
        (1.0, &AnsatzFamily::<f64>::basis(&fam, 1, &[1.0]).unwrap()),
        (-0.5, &AnsatzFamily::<f64>::basis(&fam, 0, &[1.0]).unwrap()),
    ])
    .unwrap();
    let f1 = GaussianFamily.basis(0, &[1.0]).unwrap();
    let ov = Integrator::new(1e-10).inner(&f1, &psi0).unwrap();
    assert!(ov.abs() < 1e-13);
    struct Fixed(WaveFunction<f64>);
    impl AnsatzFamily<f64> for Fixed {
        fn dim(&self) -> usize {
            1
        }
        fn param_count(&self) -> usize {
            1
        }
        fn basis(&self, _: usize, _: &[f64]) -> Result<WaveFunction<f64>, SymError> {
            Ok(self.0.clone())
        }
        fn param_box(&self) -> Vec<(f64, f64)> {
            vec![(0.5, 2.0)]
        }
        fn name(&self) -> String {
            "fixed".into()
        }
    }
    let frozen = FrozenSet::from_states(vec![psi0], Some(&h), 1e-10).unwrap();
    let o = orthogonalize_m2(1, &[1.0], &Fixed(f1), &frozen, &SolverConfig::new(Method::Method2)).unwrap();
    assert!(o.coeffs[0].abs() < 1e-13);
}

#[test]
fn su2_m2_coefficient_matches_closed_form() {
    let fam = Su2Family { d: 2 };
    let (w0, w1) = (1.128f64, 1.32);
    let psi0 = fam.basis(0, &[w0]).unwrap();
    let frozen = FrozenSet::from_states(vec![psi0], None, 1e-10).unwrap();
    let o = orthogonalize_m2(1, &[w1], &fam, &frozen, &SolverConfig::new(Method::Method2)).unwrap();
    let expect = su2_c10(2, w0, w1);
    assert!((o.coeffs[0] - expect).abs() < 1e-12 * expect.abs(), "{} vs {expect}", o.coeffs[0]);
    let d2 = -48.0 * w0.powi(3) / (w1 + w0).powi(4);
    assert!((expect - d2).abs() < 1e-14);
}

fn random_orthogonal_frozen(ws: &[f64]) -> Vec<WaveFunction<f64>> {
    // Gram–Schmidt over iso Gaussians of distinct widths, even powers.
    let fam = anharmonic_family(Parity::Even, AnharmonicBasis::Gn);
    let mut integ = Integrator::new(1e-10);
    let mut out: Vec<WaveFunction<f64>> = Vec::new();
    for (n, &w) in ws.iter().enumerate() {
        let mut f = AnsatzFamily::<f64>::basis(&fam, n, &[w]).unwrap();
        for p in &out {
            let c = integ.inner(&f, p).unwrap() / integ.inner(p, p).unwrap();
            f = f.add_scaled(-c, p).unwrap();
        }
        out.push(f);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn m2_formula_equals_linear_system(ws in prop::collection::vec(0.3f64..3.0, 3), w in 0.3f64..3.0) {
        let states = random_orthogonal_frozen(&ws);
        let fam = anharmonic_family(Parity::Even, AnharmonicBasis::Gn);
        let frozen = FrozenSet::from_states(states.clone(), None, 1e-10).unwrap();
        let o = orthogonalize_m2(3, &[w], &fam, &frozen, &SolverConfig::new(Method::Method2)).unwrap();
        // ⟨ψⱼ, Σ cₗψₗ + f⟩ = 0 as a full linear system in the frozen Gram matrix.
        let f = AnsatzFamily::<f64>::basis(&fam, 3, &[w]).unwrap();
        let mut integ = Integrator::new(1e-10);
        let g = DenseMatrix::from_fn(3, |j, l| integ.inner(&states[j], &states[l]).unwrap());
        let b: Vec<f64> = (0..3).map(|j| -integ.inner(&states[j], &f).unwrap()).collect();
        let sol = solve_linear(&g, &b).unwrap();
        for l in 0..3 {
            prop_assert!((o.coeffs[l] - sol.x[l]).abs() <= 1e-10 * (1.0 + sol.x[l].abs()));
        }
    }
}

#[test]
fn anharmonic_row_zero() {
    let fam = anharmonic_family(Parity::Even, AnharmonicBasis::Gn);
    let h = anharmonic_hamiltonian::<f64>();
    let est = solve_level(0, &h, &fam, &[], &SolverConfig::new(Method::Method1)).unwrap();
    assert!((est.energy - 1.086).abs() < 0.005 * 1.086, "E = {}", est.energy);
    assert!((est.omega[0] - 1.54).abs() < 0.05, "ω = {}", est.omega[0]);
    assert!(error_bound_check(&est, 1.06036167));
}

#[test]
fn anharmonic_quartic_row_zero() {
    let fam = anharmonic_family(Parity::Even, AnharmonicBasis::Gn2);
    let h = anharmonic_hamiltonian::<f64>();
    let est = solve_level(0, &h, &fam, &[], &SolverConfig::new(Method::Method1)).unwrap();
    assert!((est.energy - 1.0604541).abs() < 1e-3, "E = {}", est.energy);
    assert!((est.residual - 0.05).abs() < 0.01, "R = {}", est.residual);
    assert!((est.omega[0] - 1.10).abs() < 0.05 && (est.omega[1] - 0.29).abs() < 0.05);
}

#[test]
fn rayleigh_objective_only_changes_level_zero() {
    let fam = anharmonic_family(Parity::Even, AnharmonicBasis::Gn);
    let h = anharmonic_hamiltonian::<f64>();
    let mut cfg = SolverConfig::new(Method::Method1);
    cfg.objective = Objective::RayleighForGroundState;
    let est = solve_level(0, &h, &fam, &[], &cfg).unwrap();
    // ω/2 + 3/(4ω²) is minimal at ω = 3^{1/3}
    let w = 3f64.cbrt();
    assert!((est.omega[0] - w).abs() < 1e-4);
    assert!((est.energy - (w / 2.0 + 0.75 / (w * w))).abs() < 1e-10);
    let res = solve_level(0, &h, &fam, &[], &SolverConfig::new(Method::Method1)).unwrap();
    assert!(res.residual < est.residual && res.energy > est.energy);
}

#[test]
fn odd_tower_is_orthogonal() {
    let fam = anharmonic_family(Parity::Odd, AnharmonicBasis::Gn);
    let h = anharmonic_hamiltonian::<f64>();
    for method in [Method::Method1, Method::Method2] {
        let tower = solve_tower(4, &h, &fam, &SolverConfig::new(method)).unwrap();
        assert!(max_pairwise_overlap(&tower) < 1e-8, "{method}");
        for est in &tower {
            let r2 = varspec::symcore::variance_objective(&est.state, &h).unwrap().1;
            assert!((r2 - est.residual * est.residual).abs() < 1e-9 * (1.0 + r2));
        }
    }
}

#[test]
fn error_bound_examples() {
    let mut est = SpectrumEstimate {
        level: 0,
        energy: 1.086,
        residual: 0.5,
        omega: vec![1.54],
        coeffs: vec![],
        state: GaussianFamily.basis(0, &[1.54]).unwrap(),
        norm_sq: 1.0,
        evaluations: 0,
    };
    assert!(error_bound_check(&est, 1.06036167));
    est.energy = 21.236251;
    est.residual = 0.14;
    assert!(error_bound_check(&est, 21.2383729));
    est.residual = 0.0;
    assert!(error_bound_check(&est, 21.236251));
    assert!(!error_bound_check(&est, 21.2383729));
}

#[test]
fn single_level_tower_matches_solve_level() {
    let fam = anharmonic_family(Parity::Even, AnharmonicBasis::Gn);
    let h = anharmonic_hamiltonian::<f64>();
    let cfg = SolverConfig::new(Method::Method1);
    let a = solve_tower(1, &h, &fam, &cfg).unwrap();
    let b = solve_level(0, &h, &fam, &[], &cfg).unwrap();
    assert_eq!(a[0].energy.to_bits(), b.energy.to_bits());
    assert_eq!(a[0].omega, b.omega);
}

#[test]
fn config_and_frozen_errors() {
    let fam = anharmonic_family(Parity::Even, AnharmonicBasis::Gn);
    let h = anharmonic_hamiltonian::<f64>();
    let mut cfg = SolverConfig::new(Method::Method1);
    assert!(solve_level(1, &h, &fam, &[], &cfg).is_err());
    assert!(solve_tower(0, &h, &fam, &cfg).is_err());
    cfg.xtol = 0.0;
    assert!(solve_level(0, &h, &fam, &[], &cfg).is_err());
}
