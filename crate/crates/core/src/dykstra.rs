//! Dykstra's alternating projections onto an intersection of closed convex
//! sets, each of which has an exact projector.

use crate::convex::ConvexSet;
use crate::error::{Error, Result};
use crate::linalg::{dist, dot, norm, Point};

pub const MAX_SWEEPS: usize = 100_000;

/// One closed convex piece of an intersection.
#[derive(Debug, Clone, Copy)]
pub enum Primitive<'a> {
    /// `{x | a·x <= b}`
    Halfspace(&'a [f64], f64),
    Box(&'a [f64], &'a [f64]),
    Ball(&'a [f64], f64),
    /// Closed fattening `S + r B̄`.
    Fattened(&'a ConvexSet, f64),
}

impl Primitive<'_> {
    pub fn project(&self, x: &[f64]) -> Result<Point> {
        Ok(match *self {
            Primitive::Halfspace(a, b) => {
                let excess = dot(a, x) - b;
                if excess <= 0.0 {
                    x.to_vec()
                } else {
                    let s = excess / dot(a, a);
                    x.iter().zip(a).map(|(xi, ai)| xi - s * ai).collect()
                }
            }
            Primitive::Box(lo, hi) => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (l, h))| v.clamp(*l, *h))
                .collect(),
            Primitive::Ball(c, r) => project_ball(c, r, x),
            Primitive::Fattened(set, r) => {
                let p = set.project(x)?;
                let d = dist(x, &p);
                if d <= r {
                    x.to_vec()
                } else {
                    p.iter()
                        .zip(x)
                        .map(|(pi, xi)| pi + r * (xi - pi) / d)
                        .collect()
                }
            }
        })
    }

    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        Ok(match *self {
            Primitive::Halfspace(a, b) => ((dot(a, x) - b) / norm(a)).max(0.0),
            Primitive::Ball(c, r) => (dist(c, x) - r).max(0.0),
            Primitive::Fattened(set, r) => (set.distance(x)? - r).max(0.0),
            Primitive::Box(..) => dist(&self.project(x)?, x),
        })
    }

    fn is_linear(&self) -> bool {
        matches!(self, Primitive::Halfspace(..) | Primitive::Box(..))
    }
}

pub fn project_ball(c: &[f64], r: f64, x: &[f64]) -> Point {
    let d = dist(c, x);
    if d <= r {
        x.to_vec()
    } else {
        c.iter()
            .zip(x)
            .map(|(ci, xi)| ci + r * (xi - ci) / d)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct DykstraOutcome {
    pub point: Point,
    pub sweeps: usize,
    pub violation: f64,
}

/// Projects `x` onto the intersection of `parts`.
///
/// Stops when the squared change of all Dykstra increments over one sweep
/// falls below `(1e-3 tol)^2` and the iterate lies within `tol` of every part.
/// Every 200 sweeps, plain cyclic projections test the intersection for
/// emptiness.
pub fn project(x: &[f64], parts: &[Primitive<'_>], tol: f64) -> Result<DykstraOutcome> {
    if parts.is_empty() {
        return Ok(DykstraOutcome {
            point: x.to_vec(),
            sweeps: 0,
            violation: 0.0,
        });
    }
    let d = x.len();
    let mut iterate = x.to_vec();
    let mut increments = vec![vec![0.0; d]; parts.len()];
    let threshold = (1e-3 * tol).powi(2);
    let mut violation = f64::INFINITY;
    for sweep in 1..=MAX_SWEEPS {
        let mut change = 0.0;
        for (part, inc) in parts.iter().zip(increments.iter_mut()) {
            let y: Point = iterate.iter().zip(inc.iter()).map(|(a, b)| a + b).collect();
            let next = part.project(&y)?;
            for k in 0..d {
                let new_inc = y[k] - next[k];
                change += (new_inc - inc[k]).powi(2);
                inc[k] = new_inc;
            }
            iterate = next;
        }
        // The iterate can rest while the increments still move, so only
        // the increments decide convergence.
        if change <= threshold {
            violation = max_violation(&iterate, parts)?;
            if violation <= tol {
                let point = polish(x, &iterate, parts, tol).unwrap_or(iterate);
                return Ok(DykstraOutcome {
                    point,
                    sweeps: sweep,
                    violation,
                });
            }
        }
        if sweep % 200 == 0 {
            if let Some(gap) = cyclic_gap(&iterate, parts, tol)? {
                return Err(empty(parts.len(), gap));
            }
        }
    }
    if violation.is_infinite() {
        violation = max_violation(&iterate, parts)?;
    }
    Err(Error::NonConvergence {
        iterations: MAX_SWEEPS,
        residual: violation,
    })
}

fn empty(count: usize, gap: f64) -> Error {
    Error::EmptySet(format!(
        "intersection of {count} convex parts is empty (gap {gap:e})"
    ))
}

/// Plain cyclic projections from `start`. They converge to a cycle whose
/// length is positive exactly when the intersection is empty; returns the
/// violation of the limit cycle when it exceeds `tol`.
fn cyclic_gap(start: &[f64], parts: &[Primitive<'_>], tol: f64) -> Result<Option<f64>> {
    let mut x = start.to_vec();
    let mut last = f64::INFINITY;
    for _ in 0..20_000 {
        let before = x.clone();
        for p in parts {
            x = p.project(&x)?;
        }
        let v = max_violation(&x, parts)?;
        if v <= tol {
            return Ok(None);
        }
        let moved = dist(&before, &x);
        if moved <= 1e-14 * (1.0 + norm(&x)) && (last - v).abs() <= 1e-12 * (1.0 + v) {
            return Ok(Some(v));
        }
        last = v;
    }
    Ok(None)
}

pub fn max_violation(x: &[f64], parts: &[Primitive<'_>]) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in parts {
        worst = worst.max(p.distance(x)?);
    }
    Ok(worst)
}

/// Exact re-solve on the active set when every part is linear: projects `x`
/// onto the affine subspace of constraints active at `approx` and accepts the
/// result if the multipliers are nonnegative and the point stays feasible.
fn polish(x: &[f64], approx: &[f64], parts: &[Primitive<'_>], tol: f64) -> Option<Point> {
    if !parts.iter().all(Primitive::is_linear) {
        return None;
    }
    let d = x.len();
    let mut rows: Vec<(Point, f64)> = Vec::new();
    for p in parts {
        match *p {
            Primitive::Halfspace(a, b) => {
                let n = norm(a);
                if (dot(a, approx) - b) / n >= -1e-7 {
                    rows.push((a.iter().map(|v| v / n).collect(), b / n));
                }
            }
            Primitive::Box(lo, hi) => {
                for i in 0..d {
                    if approx[i] - hi[i] >= -1e-7 {
                        let mut e = vec![0.0; d];
                        e[i] = 1.0;
                        rows.push((e, hi[i]));
                    } else if lo[i] - approx[i] >= -1e-7 {
                        let mut e = vec![0.0; d];
                        e[i] = -1.0;
                        rows.push((e, -lo[i]));
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    if rows.is_empty() || rows.len() > d {
        return None;
    }
    let k = rows.len();
    let gram = nalgebra::DMatrix::from_fn(k, k, |i, j| dot(&rows[i].0, &rows[j].0));
    let rhs = nalgebra::DVector::from_fn(k, |i, _| dot(&rows[i].0, x) - rows[i].1);
    let lambda = gram.cholesky()?.solve(&rhs);
    if lambda.iter().any(|l| *l < -1e-12) {
        return None;
    }
    let mut p = x.to_vec();
    for (i, (a, _)) in rows.iter().enumerate() {
        for j in 0..d {
            p[j] -= lambda[i] * a[j];
        }
    }
    let ok = max_violation(&p, parts).ok()? <= 1e-12 * (1.0 + norm(&p));
    (ok && dist(&p, approx) <= 1e3 * tol.max(1e-9)).then_some(p)
}
