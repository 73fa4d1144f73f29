use discord_core::geometric::{dephased_purity, werner_geo_closed};
use discord_core::measurement::ProductMeasurement;
use discord_core::optimizer::{
    alternating_sphere_max, maximize_over_product_bases, sphere_grid_oracle, unitary_from_params, warm_starts,
    FnProductObjective,
};
use discord_core::qstate::{random_state, to_bloch, werner};
use discord_core::{BipartiteState, OptimizerConfig, OrthonormalBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn purity_objective(s: &BipartiteState) -> impl discord_core::optimizer::ProductObjective + '_ {
    FnProductObjective::new(s.dims(), move |m: &ProductMeasurement| dephased_purity(s, m).unwrap())
}

#[test]
fn werner_dephased_purity_maximum() {
    let s = werner(3, 1.0).unwrap();
    let r = maximize_over_product_bases(&purity_objective(&s), &OptimizerConfig::default(), &[]).unwrap();
    let expected = s.purity() - werner_geo_closed(3, 1.0).unwrap();
    assert!((r.report.best_value - expected).abs() < 1e-6);
    assert!(r.report.converged);
}

#[test]
fn deterministic_and_warm_start_dominant() {
    let s = random_state(3, 2, 3, 12).unwrap();
    let cfg = OptimizerConfig::default().with_restarts(5).with_seed(3);
    let a = maximize_over_product_bases(&purity_objective(&s), &cfg, &[]).unwrap();
    let b = maximize_over_product_bases(&purity_objective(&s), &cfg, &[]).unwrap();
    assert_eq!(a.report, b.report);
    let warm = maximize_over_product_bases(&purity_objective(&s), &cfg, std::slice::from_ref(&a.measurement)).unwrap();
    assert!(warm.report.best_value >= a.report.best_value);

    let w = werner(3, -0.4).unwrap();
    let cold = maximize_over_product_bases(&purity_objective(&w), &cfg.with_restarts(2), &[]).unwrap();
    let seeded =
        maximize_over_product_bases(&purity_objective(&w), &cfg.with_restarts(2), &warm_starts::werner(3, 0)).unwrap();
    assert!(seeded.report.best_value >= cold.report.best_value - 1e-15);
}

#[test]
fn parametrized_unitaries_are_valid_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=4 {
        for _ in 0..25 {
            let p: Vec<f64> = (0..n * n).map(|_| rng.random_range(-10.0..10.0)).collect();
            OrthonormalBasis::from_unitary(unitary_from_params(&p, n).unwrap()).unwrap();
        }
    }
}

/// The dephased purity of two qubits is `¼(1 + sphere objective)`, so the general basis
/// search and the sphere grid must agree.
#[test]
fn basis_search_agrees_with_sphere_grid() {
    let cfg = OptimizerConfig::default().with_restarts(16);
    for seed in 0..50u64 {
        let s = random_state(2, 2, 1 + seed as usize % 4, 20_000 + seed).unwrap();
        let b = to_bloch(&s).unwrap();
        let found = maximize_over_product_bases(&purity_objective(&s), &cfg, &[]).unwrap();
        let via_search = 4.0 * found.report.best_value - 1.0;
        let grid = sphere_grid_oracle(&b, 100);
        assert!((via_search - grid).abs() <= 2e-4 * 4.0, "seed {seed}: {via_search} vs {grid}");
        assert!(grid <= via_search + 1e-10);
        let alt = alternating_sphere_max(&b, &cfg).unwrap().value;
        assert!((alt - via_search).abs() < 1e-8);
    }
}
