use magnitude_core::boundary::{BoundaryConventions, BoundaryEngine};
use magnitude_core::expr::Cq;
use magnitude_core::selftest::{random_graph_jets, run_all, SelfTestConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn suites_pass_on_a_small_sample() {
    let report = run_all(&SelfTestConfig { charts: 2, seed: 11, ..Default::default() });
    let failures: Vec<_> = report.failures().collect();
    assert!(failures.is_empty(), "{failures:?}");
    assert_eq!(report.checks.iter().filter(|c| c.suite == "residuals").count(), 4);
}

#[test]
fn residual_checks_detect_a_corrupted_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let jets = random_graph_jets(&mut rng, 1, 4);
    let eng = BoundaryEngine::new(&jets, 2, 3, BoundaryConventions::default()).unwrap();
    let q = eng.q_symbols();
    let mut f = eng.factor(&q).unwrap();
    eng.factor_residual(&q, &f).unwrap();
    let w = eng.inverse_factors(&f);
    eng.inverse_residual(&f, &w).unwrap();

    f.plus[1] = f.plus[1].add(&f.plus[0].scale(&Cq::real(1.into())));
    assert!(eng.factor_residual(&q, &f).is_err());
    let mut w_bad = eng.inverse_factors(&f);
    w_bad.minus[1] = w_bad.minus[1].scale(&Cq::real(2.into()));
    assert!(eng.inverse_residual(&f, &w_bad).is_err());
}
