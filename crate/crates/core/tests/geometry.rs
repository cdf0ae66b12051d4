mod common;

use cadselect::convex::{support_and_contains, ConvexSet};
use cadselect::linalg::{dist, dot, sub};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn set_and_points() -> impl Strategy<Value = (ConvexSet, Vec<f64>, Vec<f64>, u64)> {
    (1usize..=3, any::<u64>()).prop_map(|(d, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = common::random_set(&mut rng, d);
        let x = common::random_point(&mut rng, d);
        let y = common::random_point(&mut rng, d);
        (set, x, y, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn projection_is_idempotent_and_feasible((set, x, _y, _s) in set_and_points()) {
        let p = set.project(&x).unwrap();
        prop_assert!(common::member(&set, &p, TOL));
        let q = set.project(&p).unwrap();
        prop_assert!(dist(&p, &q) <= TOL);
    }

    #[test]
    fn projection_is_nonexpansive((set, x, y, _s) in set_and_points()) {
        let px = set.project(&x).unwrap();
        let py = set.project(&y).unwrap();
        prop_assert!(dist(&px, &py) <= dist(&x, &y) + TOL);
    }

    #[test]
    fn variational_inequality((set, x, _y, seed) in set_and_points()) {
        let p = set.project(&x).unwrap();
        let r = sub(&x, &p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut zs = set.extreme_points().unwrap();
        zs.extend(set.projection_samples(&mut rng, 20).unwrap());
        for z in zs {
            prop_assert!(dot(&r, &sub(&z, &p)) <= TOL * (1.0 + dist(&z, &p) + dist(&x, &p)));
        }
    }

    #[test]
    fn distance_matches_projection((set, x, _y, _s) in set_and_points()) {
        let p = set.project(&x).unwrap();
        prop_assert!((set.distance(&x).unwrap() - dist(&x, &p)).abs() <= TOL);
    }

    #[test]
    fn support_dominates_members((set, x, _y, seed) in set_and_points()) {
        let (h, arg) = set.support(&x).unwrap();
        prop_assert!(common::member(&set, &arg, TOL));
        prop_assert!((dot(&x, &arg) - h).abs() <= TOL * (1.0 + h.abs()));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for z in set.projection_samples(&mut rng, 20).unwrap() {
            prop_assert!(dot(&x, &z) <= h + TOL * (1.0 + h.abs()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_agrees_with_dense_grid(d in 1usize..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = common::random_set(&mut rng, d);
        let x = common::random_point(&mut rng, d);
        let h = 1e-2;
        // lattice spacing h / sqrt(d): every cell has diameter h
        let oracle = common::dense_grid_distance(&set, &x, h / (d as f64).sqrt());
        let exact = set.distance(&x).unwrap();
        prop_assert!(oracle >= exact - TOL, "{oracle} < {exact}");
        prop_assert!(oracle <= exact + h + TOL, "{oracle} > {exact} + {h}");
    }

    #[test]
    fn containment_is_reflexive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = common::random_set(&mut rng, 2);
        let c = support_and_contains(&set, &set, TOL).unwrap();
        prop_assert!(c.contained);
    }
}

#[test]
fn simplex_distance_from_the_far_corner() {
    let simplex = cadselect::fixtures::simplex().evaluate(0.0).unwrap();
    let oracle = common::dense_grid_distance(&simplex, &[1.0, 1.0], 1e-3);
    let exact = simplex.distance(&[1.0, 1.0]).unwrap();
    assert!((exact - 0.5f64.sqrt()).abs() <= TOL);
    assert!((oracle - exact).abs() <= 1e-3 + TOL);
}

#[test]
fn containment_witness_lies_outside() {
    let inner = ConvexSet::ball(vec![0.0, 0.0], 1.0).unwrap();
    let outer = ConvexSet::boxed(vec![-0.9, -2.0], vec![2.0, 2.0]).unwrap();
    let c = support_and_contains(&inner, &outer, TOL).unwrap();
    assert!(!c.contained);
    let w = c.witness.unwrap();
    assert!(common::member(&inner, &w, TOL));
    assert!(outer.distance(&w).unwrap() > TOL);
}

fn region_case(seed: u64, d: usize) -> (ConvexSet, Vec<(Vec<f64>, f64)>, cadselect::region::Region, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let set = common::random_set(&mut rng, d);
    let anchor = set.projection_samples(&mut rng, 1).unwrap().remove(0);
    let mut balls = Vec::new();
    let mut region = cadselect::region::Region::from(set.clone());
    for _ in 0..rng.gen_range(1..=2) {
        // a ball through a common point keeps the intersection nonempty
        let offset = common::random_point(&mut rng, d).iter().map(|v| v * 0.1).collect::<Vec<_>>();
        let center: Vec<f64> = anchor.iter().zip(&offset).map(|(a, o)| a + o).collect();
        let r = dist(&center, &anchor) + rng.gen_range(0.0..0.3);
        region = region.with_ball(center.clone(), r);
        balls.push((center, r));
    }
    let x = common::random_point(&mut rng, d);
    (set, balls, region, x)
}

fn in_region(set: &ConvexSet, balls: &[(Vec<f64>, f64)], p: &[f64], tol: f64) -> bool {
    common::member(set, p, tol) && balls.iter().all(|(c, r)| dist(c, p) <= r + tol)
}

use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn region_projection_laws(d in 1usize..=3, seed in any::<u64>(), other in any::<u64>()) {
        let (set, balls, region, x) = region_case(seed, d);
        let p = region.project(&x).unwrap();
        prop_assert!(in_region(&set, &balls, &p, 1e-8));
        let q = region.project(&p).unwrap();
        prop_assert!(dist(&p, &q) <= 1e-8);
        let mut rng = ChaCha8Rng::seed_from_u64(other);
        let y = common::random_point(&mut rng, d);
        let py = region.project(&y).unwrap();
        prop_assert!(dist(&p, &py) <= dist(&x, &y) + 1e-8);
    }

    #[test]
    fn region_distance_agrees_with_dense_grid(d in 1usize..=2, seed in any::<u64>()) {
        let (set, balls, region, x) = region_case(seed, d);
        let h = 1e-2;
        let step = h / (d as f64).sqrt();
        let (lo, hi) = common::data_box(&set);
        let mut best = f64::INFINITY;
        let counts: Vec<usize> = lo.iter().zip(&hi).map(|(l, u)| ((u - l) / step).ceil() as usize + 1).collect();
        let total: usize = counts.iter().product();
        for flat in 0..total {
            let mut rem = flat;
            let g: Vec<f64> = (0..d).map(|i| {
                let k = rem % counts[i];
                rem /= counts[i];
                (lo[i] + k as f64 * step).min(hi[i])
            }).collect();
            if in_region(&set, &balls, &g, 0.0) {
                best = best.min(dist(&g, &x));
            }
        }
        // optimality against every feasible lattice point, feasibility exactly
        let p = region.project(&x).unwrap();
        prop_assert!(in_region(&set, &balls, &p, 1e-8));
        prop_assert!(best >= dist(&p, &x) - 1e-8, "{best} < {}", dist(&p, &x));
    }
}
