mod common;

use std::f64::consts::PI;

use cadselect::convex::sets_equal;
use cadselect::fixtures;
use cadselect::mapping::SetMap;
use cadselect::probe::ProbeCatalog;
use cadselect::regularity::{
    check_assumption1, check_right_isc, check_vec_full_domain, detect_discontinuity_sets, grid_for, isc_ladder,
    left_cluster, regularity_report, window_start, CheckConfig, Cluster,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn values_approach_from_the_right(d in 1usize..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_cadlag_mapping(&mut rng, d);
        let lip = m.lipschitz();
        let mut times = vec![0.0];
        times.extend(m.breakpoints().into_iter().filter(|&t| t < 1.0));
        for t in times {
            let value = m.evaluate(t).unwrap();
            let mut ys = value.extreme_points().unwrap_or_default();
            ys.extend(value.projection_samples(&mut rng, 5).unwrap());
            for y in ys {
                for h in [1e-2, 1e-3, 1e-4] {
                    // box bounds move by at most L h per coordinate; a ball's
                    // center and radius together by at most (sqrt(d) + 1) L h
                    let bound = ((d as f64).sqrt() + 1.0) * lip * h + TOL;
                    let dist = m.evaluate(t + h).unwrap().distance(&y).unwrap();
                    prop_assert!(dist <= bound, "t {t} h {h}: {dist} > {bound}");
                }
            }
        }
    }

    #[test]
    fn left_limit_equals_value_inside_pieces(d in 1usize..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_cadlag_mapping(&mut rng, d);
        let breaks = m.breakpoints();
        for _ in 0..10 {
            let t: f64 = rng.gen_range(0.01..0.99);
            if breaks.iter().any(|&b| (b - t).abs() < 1e-12) {
                continue;
            }
            let left = m.left_limit(t).unwrap().expect("nonempty");
            prop_assert!(sets_equal(&left, &m.evaluate(t).unwrap(), TOL).unwrap());
        }
    }

    #[test]
    fn discontinuities_lie_on_breakpoints(d in 1usize..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_cadlag_mapping(&mut rng, d);
        let found = detect_discontinuity_sets(&m, TOL).unwrap();
        let breaks = m.breakpoints();
        prop_assert!(found.d1.iter().chain(&found.d2).all(|t| breaks.contains(t)));
        prop_assert!(!found.d1.contains(&0.0) && !found.d2.contains(&0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cadlag_mappings_pass_every_check(d in 1usize..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_cadlag_mapping(&mut rng, d);
        let grid = grid_for(&m, 100);
        let report = regularity_report(&m, &grid, &ProbeCatalog::default(), &CheckConfig::default()).unwrap();
        prop_assert!(report.isc.pass, "{:?}", report.isc.witness);
        prop_assert!(report.vec_domain.pass);
        prop_assert!(report.assumption1.pass, "{:?}", report.assumption1.failures.first());
    }
}

#[test]
fn oscillator_is_isc_without_a_left_limit() {
    let m = fixtures::example_2_1();
    let grid = grid_for(&m, 1000);
    assert!(check_right_isc(&m, &grid, &CheckConfig::default()).unwrap().pass);
    assert!(m.left_limit(PI).unwrap().is_none());
    assert!(m.left_limit(PI - 0.5).unwrap().is_some());
}

#[test]
fn isc_witness_reproduces() {
    let m = fixtures::left_continuous_step();
    let grid = grid_for(&m, 1000);
    let cfg = CheckConfig::default();
    let verdict = check_right_isc(&m, &grid, &cfg).unwrap();
    let w = verdict.witness.expect("the step kept at 0.5 is not right isc");
    assert_eq!(w.t, 0.5);
    let again = isc_ladder(&m, w.t, &w.y).unwrap();
    assert_eq!(again, w.ladder);
    assert!(again.last().unwrap().1 > cfg.tol_isc);
    assert_eq!(check_right_isc(&m, &grid, &cfg).unwrap().witness, Some(w));
}

#[test]
fn domain_witness_reproduces() {
    let m = fixtures::example_2_1();
    let grid = grid_for(&m, 1000);
    let verdict = check_vec_full_domain(&m, &grid).unwrap();
    let t = verdict.witness.unwrap();
    assert!(m.left_region(t).unwrap().is_none());
}

#[test]
fn assumption1_failures_reproduce() {
    let m = fixtures::example_2_1();
    let cfg = CheckConfig::default();
    let verdict = check_assumption1(&m, &ProbeCatalog::default(), &cfg).unwrap();
    assert!(!verdict.failures.is_empty());
    for f in &verdict.failures {
        let again = left_cluster(&m, f.t, &f.probe.center, f.probe.radius, window_start(&m), cfg.tol_geom).unwrap();
        assert_eq!(again, Cluster::Diverged { spread: f.spread });
    }
}

#[test]
fn reports_do_not_depend_on_the_thread_count() {
    let m = fixtures::example_2_1();
    let grid = grid_for(&m, 1000);
    let run = || {
        regularity_report(&m, &grid, &ProbeCatalog::default(), &CheckConfig::default())
            .unwrap()
            .to_toml()
            .unwrap()
    };
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
    assert_eq!(one, four);
}
