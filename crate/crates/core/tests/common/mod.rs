//! Brute-force oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use cadselect::coefficient::CoefficientFunction;
use cadselect::convex::{ConvexSet, HPolytope};
use cadselect::mapping::{Family, SetValuedMapping};
use rand::Rng;

/// Axis-aligned box containing the set, read off its data.
pub fn data_box(set: &ConvexSet) -> (Vec<f64>, Vec<f64>) {
    match set {
        ConvexSet::Box { lower, upper } => (lower.clone(), upper.clone()),
        ConvexSet::Ball { center, radius } => (
            center.iter().map(|c| c - radius).collect(),
            center.iter().map(|c| c + radius).collect(),
        ),
        ConvexSet::Polytope(p) => (p.lower.clone(), p.upper.clone()),
    }
}

/// Membership straight from the defining inequalities.
pub fn member(set: &ConvexSet, x: &[f64], tol: f64) -> bool {
    match set {
        ConvexSet::Box { lower, upper } => x
            .iter()
            .zip(lower.iter().zip(upper))
            .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol),
        ConvexSet::Ball { center, radius } => {
            let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
            d2.sqrt() <= radius + tol
        }
        ConvexSet::Polytope(p) => {
            p.normals
                .iter()
                .zip(&p.offsets)
                .all(|(a, b)| a.iter().zip(x).map(|(u, v)| u * v).sum::<f64>() <= b + tol)
                && x
                    .iter()
                    .zip(p.lower.iter().zip(&p.upper))
                    .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol)
        }
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
}

/// Minimum distance from `x` to the lattice points of step `h` (anchored at
/// the data box's lower corner) that lie in the set. `d <= 2`.
pub fn dense_grid_distance(set: &ConvexSet, x: &[f64], h: f64) -> f64 {
    let (lo, hi) = data_box(set);
    let counts: Vec<usize> = lo
        .iter()
        .zip(&hi)
        .map(|(l, u)| ((u - l) / h).ceil() as usize + 1)
        .collect();
    let at = |i: usize, k: usize| (lo[i] + k as f64 * h).min(hi[i]);
    let mut best = f64::INFINITY;
    match lo.len() {
        1 => {
            for a in 0..counts[0] {
                let p = [at(0, a)];
                if member(set, &p, 0.0) {
                    best = best.min(euclid(&p, x));
                }
            }
        }
        2 => {
            for a in 0..counts[0] {
                for b in 0..counts[1] {
                    let p = [at(0, a), at(1, b)];
                    if member(set, &p, 0.0) {
                        best = best.min(euclid(&p, x));
                    }
                }
            }
        }
        d => panic!("dense grid oracle supports d <= 2, got {d}"),
    }
    best
}

/// Dense samples of `{x in S : |x| minimal}`-type questions: the minimum
/// of `f` over the lattice of step `h` inside a one-dimensional interval.
pub fn dense_interval_min(lo: f64, hi: f64, h: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = ((hi - lo) / h).ceil() as usize;
    (0..=n)
        .map(|k| f((lo + k as f64 * h).min(hi)))
        .fold(f64::INFINITY, f64::min)
}

/// A random box, ball or polytope in `[-2, 2]^d`. Polytopes are boxes cut
/// by up to three halfspaces that keep a chosen interior point.
pub fn random_set<R: Rng>(rng: &mut R, d: usize) -> ConvexSet {
    let point = |rng: &mut R| -> Vec<f64> { (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect() };
    match rng.gen_range(0..3) {
        0 => {
            let c = point(rng);
            let w: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..0.5)).collect();
            ConvexSet::boxed(
                c.iter().zip(&w).map(|(a, b)| a - b).collect(),
                c.iter().zip(&w).map(|(a, b)| a + b).collect(),
            )
            .unwrap()
        }
        1 => ConvexSet::ball(point(rng), rng.gen_range(0.05..0.8)).unwrap(),
        _ => {
            let c = point(rng);
            let lower: Vec<f64> = c.iter().map(|v| v - rng.gen_range(0.2..0.6)).collect();
            let upper: Vec<f64> = c.iter().map(|v| v + rng.gen_range(0.2..0.6)).collect();
            let k = rng.gen_range(1..=3);
            let mut normals = Vec::new();
            let mut offsets = Vec::new();
            for _ in 0..k {
                let mut a: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let n = a.iter().map(|v| v * v).sum::<f64>().sqrt();
                if n < 1e-3 {
                    a = vec![1.0; d];
                }
                let b = a.iter().zip(&c).map(|(u, v)| u * v).sum::<f64>() + rng.gen_range(0.05..0.4);
                normals.push(a);
                offsets.push(b);
            }
            ConvexSet::Polytope(HPolytope::new(normals, offsets, lower, upper).unwrap())
        }
    }
}

pub fn random_point<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect()
}

/// Piecewise-affine càdlàg coefficient on `[0, 1]` with the given interior
/// breakpoints and values in `[lo, hi)`.
pub fn random_coefficient<R: Rng>(rng: &mut R, cuts: &[f64], lo: f64, hi: f64) -> CoefficientFunction {
    let mut breakpoints = vec![0.0];
    breakpoints.extend_from_slice(cuts);
    breakpoints.push(1.0);
    let n = breakpoints.len() - 1;
    CoefficientFunction::new(
        breakpoints,
        (0..n).map(|_| rng.gen_range(lo..hi)).collect(),
        (0..n).map(|_| rng.gen_range(lo..hi)).collect(),
        rng.gen_range(lo..hi),
    )
    .unwrap()
}

/// Sum of two coefficients sharing their breakpoints.
fn plus(a: &CoefficientFunction, b: &CoefficientFunction) -> CoefficientFunction {
    CoefficientFunction::new(
        a.breakpoints.clone(),
        a.right.iter().zip(&b.right).map(|(u, v)| u + v).collect(),
        a.left.iter().zip(&b.left).map(|(u, v)| u + v).collect(),
        a.terminal + b.terminal,
    )
    .unwrap()
}

/// A random càdlàg box- or ball-valued mapping on `[0, 1]` in dimension
/// `d`, with up to two jump times drawn from a dyadic set.
pub fn random_cadlag_mapping<R: Rng>(rng: &mut R, d: usize) -> SetValuedMapping {
    let mut cuts: Vec<f64> = [0.25, 0.5, 0.75].into_iter().filter(|_| rng.gen_bool(0.4)).collect();
    cuts.truncate(2);
    let family = if rng.gen_bool(0.5) {
        let lower: Vec<_> = (0..d).map(|_| random_coefficient(rng, &cuts, -1.0, 1.0)).collect();
        let upper = lower
            .iter()
            .map(|l| plus(l, &random_coefficient(rng, &cuts, 0.0, 1.0)))
            .collect();
        Family::Box { lower, upper }
    } else {
        Family::Ball {
            center: (0..d).map(|_| random_coefficient(rng, &cuts, -1.0, 1.0)).collect(),
            radius: random_coefficient(rng, &cuts, 0.1, 1.0),
        }
    };
    SetValuedMapping::single(d, 1.0, family).unwrap()
}
