//! Lazy intersections `S ∩ B̄(c1, r1) ∩ ... ∩ (S' + r B̄)`.
//!
//! Nothing is materialized: projection tries the cheap exact cases first
//! (one dimension, a single active part, a lens of two balls, a box or ball
//! cut by at most two balls) and falls back to Dykstra's method.

use rand::Rng;

use crate::convex::{ConvexSet, TOL_GEOM};
use crate::dykstra::{self, project_ball, Primitive};
use crate::error::{Error, Result};
use crate::linalg::{direction_catalog, dist, dot, norm, Point};

#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    Ball {
        center: Point,
        radius: f64,
    },
    /// Closed fattening `set + radius·B̄`.
    Fattened {
        set: ConvexSet,
        radius: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub base: ConvexSet,
    pub extras: Vec<Constraint>,
}

impl From<ConvexSet> for Region {
    fn from(base: ConvexSet) -> Self {
        Region {
            base,
            extras: Vec::new(),
        }
    }
}

/// A part with a closed-form projector, used by the fast paths.
#[derive(Debug, Clone, Copy)]
enum Part<'a> {
    Set(&'a ConvexSet),
    Ball(&'a [f64], f64),
    Fattened(&'a ConvexSet, f64),
}

impl Part<'_> {
    fn project(&self, x: &[f64]) -> Result<Point> {
        match *self {
            Part::Set(s) => s.project(x),
            Part::Ball(c, r) => Ok(dykstra::project_ball(c, r, x)),
            Part::Fattened(s, r) => Primitive::Fattened(s, r).project(x),
        }
    }

    fn distance(&self, x: &[f64]) -> Result<f64> {
        match *self {
            Part::Set(s) => s.distance(x),
            Part::Ball(c, r) => Ok((dist(c, x) - r).max(0.0)),
            Part::Fattened(s, r) => Ok((s.distance(x)? - r).max(0.0)),
        }
    }

    fn as_ball(&self) -> Option<(&[f64], f64)> {
        match *self {
            Part::Set(ConvexSet::Ball { center, radius }) => Some((center, *radius)),
            Part::Ball(c, r) => Some((c, r)),
            Part::Fattened(ConvexSet::Ball { center, radius }, r) => Some((center, radius + r)),
            _ => None,
        }
    }

    fn interval(&self) -> (f64, f64) {
        match *self {
            Part::Set(s) => s.as_interval().expect("one-dimensional set"),
            Part::Ball(c, r) => (c[0] - r, c[0] + r),
            Part::Fattened(s, r) => {
                let (lo, hi) = s.as_interval().expect("one-dimensional set");
                (lo - r, hi + r)
            }
        }
    }
}

impl Region {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn with_ball(mut self, center: Point, radius: f64) -> Self {
        self.extras.push(Constraint::Ball { center, radius });
        self
    }

    pub fn with_fattened(mut self, set: ConvexSet, radius: f64) -> Self {
        self.extras.push(Constraint::Fattened { set, radius });
        self
    }

    /// The underlying set when no constraint has been stacked on it.
    pub fn as_set(&self) -> Option<&ConvexSet> {
        self.extras.is_empty().then_some(&self.base)
    }

    fn parts(&self) -> Vec<Part<'_>> {
        let mut parts = vec![Part::Set(&self.base)];
        for c in &self.extras {
            parts.push(match c {
                Constraint::Ball { center, radius } => Part::Ball(center, *radius),
                Constraint::Fattened { set, radius } => Part::Fattened(set, *radius),
            });
        }
        parts
    }

    /// Exact `[lo, hi]` of a one-dimensional region; `lo > hi` means empty.
    pub fn interval(&self) -> Option<(f64, f64)> {
        if self.dim() != 1 {
            return None;
        }
        Some(
            self.parts()
                .iter()
                .map(Part::interval)
                .fold((f64::NEG_INFINITY, f64::INFINITY), |(lo, hi), (a, b)| {
                    (lo.max(a), hi.min(b))
                }),
        )
    }

    pub fn project(&self, x: &[f64]) -> Result<Point> {
        if self.extras.is_empty() {
            return self.base.project(x);
        }
        if let Some((lo, hi)) = self.interval() {
            if lo > hi + TOL_GEOM {
                return Err(Error::EmptySet(format!("interval [{lo}, {hi}]")));
            }
            if lo > hi {
                return Ok(vec![0.5 * (lo + hi)]);
            }
            return Ok(vec![x[0].clamp(lo, hi)]);
        }
        let parts = self.parts();
        let scale = 1.0 + norm(x);
        let feasible = |p: &[f64], skip: &[usize]| -> Result<bool> {
            for (i, part) in parts.iter().enumerate() {
                if !skip.contains(&i) && part.distance(p)? > 1e-13 * scale {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        if feasible(x, &[])? {
            return Ok(x.to_vec());
        }
        for (i, part) in parts.iter().enumerate() {
            let p = part.project(x)?;
            if feasible(&p, &[i])? {
                return Ok(p);
            }
        }
        for i in 0..parts.len() {
            let Some((c1, r1)) = parts[i].as_ball() else {
                continue;
            };
            for j in (i + 1)..parts.len() {
                let Some((c2, r2)) = parts[j].as_ball() else {
                    continue;
                };
                if dist(c1, c2) > r1 + r2 + TOL_GEOM {
                    return Err(Error::EmptySet("two disjoint balls".into()));
                }
                // the rim holds the lens projection only when each single
                // projection leaves the other ball
                if dist(&project_ball(c1, r1, x), c2) <= r2 || dist(&project_ball(c2, r2, x), c1) <= r1 {
                    continue;
                }
                if let Some(p) = lens_projection(c1, r1, c2, r2, x) {
                    if feasible(&p, &[i, j])? {
                        return Ok(p);
                    }
                }
            }
        }
        if !matches!(self.base, ConvexSet::Polytope(_)) {
            let balls: Option<Vec<(&[f64], f64)>> = parts[1..].iter().map(Part::as_ball).collect();
            if let Some(balls) = balls.filter(|b| b.len() <= 2) {
                return dual_projection(&self.base, &balls, x);
            }
        }
        let mut prims: Vec<Primitive<'_>> = Vec::new();
        match &self.base {
            ConvexSet::Box { lower, upper } => prims.push(Primitive::Box(lower, upper)),
            ConvexSet::Ball { center, radius } => prims.push(Primitive::Ball(center, *radius)),
            ConvexSet::Polytope(p) => prims.extend(p.primitives()),
        }
        for c in &self.extras {
            prims.push(match c {
                Constraint::Ball { center, radius } => Primitive::Ball(center, *radius),
                Constraint::Fattened { set, radius } => Primitive::Fattened(set, *radius),
            });
        }
        Ok(dykstra::project(x, &prims, TOL_GEOM)?.point)
    }

    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        if self.extras.is_empty() {
            return self.base.distance(x);
        }
        Ok(dist(&self.project(x)?, x))
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        if self.extras.is_empty() {
            return Ok(self.base.contains(x, tol));
        }
        Ok(self.distance(x)? <= tol)
    }

    pub fn is_empty(&self) -> Result<bool> {
        let (lo, hi) = self.base.bounding_box();
        let mid: Point = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        match self.project(&mid) {
            Ok(_) => Ok(false),
            Err(Error::EmptySet(_)) => Ok(true),
            Err(e) => Err(e),
        }
    }

    /// Points on the boundary that stand in for extreme points: the exact
    /// extreme points of an unconstrained base, otherwise projections of far
    /// points along a fixed direction catalog.
    pub fn boundary_samples(&self) -> Result<Vec<Point>> {
        if self.extras.is_empty() {
            return self.base.extreme_points();
        }
        if let Some((lo, hi)) = self.interval() {
            if lo > hi + TOL_GEOM {
                return Err(Error::EmptySet(format!("interval [{lo}, {hi}]")));
            }
            return Ok(if hi > lo {
                vec![vec![lo], vec![hi]]
            } else {
                vec![vec![0.5 * (lo + hi)]]
            });
        }
        let (lo, hi) = self.base.bounding_box();
        let mid: Point = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let reach = 10.0 * (1.0 + dist(&lo, &hi));
        let mut out = Vec::new();
        for u in direction_catalog(self.dim(), 16) {
            let far: Point = mid.iter().zip(&u).map(|(m, v)| m + reach * v).collect();
            out.push(self.project(&far)?);
        }
        Ok(out)
    }

    /// Uniform draws from the padded bounding box projected onto the region.
    pub fn projection_samples<R: Rng>(&self, rng: &mut R, count: usize) -> Result<Vec<Point>> {
        if self.extras.is_empty() {
            return self.base.projection_samples(rng, count);
        }
        let (lo, hi) = self.base.bounding_box();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let x: Point = lo
                .iter()
                .zip(&hi)
                .map(|(l, h)| {
                    let pad = 0.25 * (h - l) + 0.1;
                    rng.gen_range((l - pad)..=(h + pad))
                })
                .collect();
            out.push(self.project(&x)?);
        }
        Ok(out)
    }
}

/// Largest multiplier tried before a ball is declared out of reach.
const MAX_MULTIPLIER: f64 = 1e16;

/// `project(base, (x + Σ λ_i c_i) / (1 + Σ λ_i))`: the minimizer over the
/// base of `|z - x|² + Σ λ_i (|z - c_i|² - r_i²)`.
fn weighted_projection(base: &ConvexSet, balls: &[(&[f64], f64)], lambdas: &[f64], x: &[f64]) -> Result<Point> {
    let total = 1.0 + lambdas.iter().sum::<f64>();
    let w: Point = (0..x.len())
        .map(|i| (x[i] + balls.iter().zip(lambdas).map(|((c, _), l)| l * c[i]).sum::<f64>()) / total)
        .collect();
    base.project(&w)
}

/// The smallest multiplier for ball `j` (others fixed) whose minimizer lies
/// in that ball. The dual is concave, so the ball's slack at the minimizer
/// is nonincreasing in its multiplier and bisection applies.
fn settle_multiplier<F>(solve: F, slack_tol: f64) -> Result<(f64, Point)>
where
    F: Fn(f64) -> Result<(f64, Point)>,
{
    let (s0, z0) = solve(0.0)?;
    if s0 <= 0.0 {
        return Ok((0.0, z0));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut best = solve(hi)?;
    while best.0 > 0.0 {
        if hi >= MAX_MULTIPLIER {
            // tangent contact: accept within tolerance
            if best.0 <= slack_tol {
                return Ok((hi, best.1));
            }
            return Err(Error::EmptySet("a ball misses the rest of the region".into()));
        }
        lo = hi;
        hi *= 2.0;
        best = solve(hi)?;
    }
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        let trial = solve(mid)?;
        if trial.0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
            best = trial;
        }
    }
    Ok((hi, best.1))
}

/// Exact projection onto `base ∩ B̄(c_1, r_1) [∩ B̄(c_2, r_2)]` through the
/// Lagrange multipliers of the balls; the result lies in the base and, up
/// to rounding, in every ball.
fn dual_projection(base: &ConvexSet, balls: &[(&[f64], f64)], x: &[f64]) -> Result<Point> {
    let slack_tol = TOL_GEOM * (1.0 + norm(x));
    let slack = |z: &[f64], (c, r): (&[f64], f64)| dist(z, c) - r;
    match balls {
        [b] => Ok(settle_multiplier(
            |l| {
                let z = weighted_projection(base, balls, &[l], x)?;
                Ok((slack(&z, *b), z))
            },
            slack_tol,
        )?
        .1),
        [b1, b2] => {
            let inner = |l2: f64| {
                settle_multiplier(
                    |l1| {
                        let z = weighted_projection(base, balls, &[l1, l2], x)?;
                        Ok((slack(&z, *b1), z))
                    },
                    slack_tol,
                )
                .map(|(_, z)| (slack(&z, *b2), z))
            };
            Ok(settle_multiplier(inner, slack_tol)?.1)
        }
        _ => unreachable!("one or two balls"),
    }
}


/// Projection onto `B̄(c1, r1) ∩ B̄(c2, r2)` when it lies on the rim where
/// both spheres meet. Returns `None` if the rim is degenerate.
fn lens_projection(c1: &[f64], r1: f64, c2: &[f64], r2: f64, x: &[f64]) -> Option<Point> {
    let gap = dist(c1, c2);
    if gap <= 0.0 || gap + r1.min(r2) <= r1.max(r2) {
        return None;
    }
    let u: Point = c2.iter().zip(c1).map(|(a, b)| (a - b) / gap).collect();
    let a = (gap * gap + r1 * r1 - r2 * r2) / (2.0 * gap);
    let rho = (r1 * r1 - a * a).max(0.0).sqrt();
    let m: Point = c1.iter().zip(&u).map(|(c, v)| c + a * v).collect();
    let rel: Point = x.iter().zip(&m).map(|(p, q)| p - q).collect();
    let along = dot(&rel, &u);
    let w: Point = rel.iter().zip(&u).map(|(r, v)| r - along * v).collect();
    let wn = norm(&w);
    if wn == 0.0 {
        return None;
    }
    Some(
        m.iter()
            .zip(&w)
            .map(|(mi, wi)| mi + rho * wi / wn)
            .collect(),
    )
}

/// Decides `inner ⊆ outer` up to `tol`. Exact for unconstrained regions;
/// otherwise every boundary sample of `inner` is tested.
pub fn region_contains(inner: &Region, outer: &Region, tol: f64) -> Result<Option<Point>> {
    if let (Some(a), Some(b)) = (inner.as_set(), outer.as_set()) {
        return Ok(crate::convex::support_and_contains(a, b, tol)?.witness);
    }
    if let (Some((a, b)), Some((c, d))) = (inner.interval(), outer.interval()) {
        if a < c - tol {
            return Ok(Some(vec![a]));
        }
        if b > d + tol {
            return Ok(Some(vec![b]));
        }
        return Ok(None);
    }
    for p in inner.boundary_samples()? {
        if outer.distance(&p)? > tol {
            return Ok(Some(p));
        }
    }
    Ok(None)
}
