//! Closed convex sets in R^d from three parametric families.
//!
//! Every operation is exact for boxes and balls. Polytopes are projected with
//! Dykstra's method over their halfspaces (plus an active-set re-solve), and
//! their support function and inradius come from the dense simplex in
//! [`crate::lp`].

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dykstra::{self, Primitive};
use crate::error::{Error, Result};
use crate::linalg::{dist, dot, norm, Point};
use crate::lp::{LinearProgram, LpOutcome};

/// Default geometric tolerance.
pub const TOL_GEOM: f64 = 1e-9;
/// Cap on enumerated extreme points.
pub const MAX_VERTICES: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexSet {
    Box { lower: Point, upper: Point },
    Ball { center: Point, radius: f64 },
    Polytope(HPolytope),
}

/// `{x | a_i·x <= b_i for all i} ∩ [lower, upper]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPolytope {
    pub normals: Vec<Point>,
    pub offsets: Vec<f64>,
    pub lower: Point,
    pub upper: Point,
    /// Certificate of nonemptiness, when one has been computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible: Option<Point>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Containment {
    pub contained: bool,
    /// A point of the inner set at distance > tol from the outer set.
    pub witness: Option<Point>,
}

impl HPolytope {
    /// Builds a polytope and certifies it nonempty with a feasible point.
    pub fn new(normals: Vec<Point>, offsets: Vec<f64>, lower: Point, upper: Point) -> Result<Self> {
        let mut p = Self::unchecked(normals, offsets, lower, upper)?;
        let center = p.chebyshev()?;
        if center.1 < -TOL_GEOM {
            return Err(Error::EmptySet("polytope constraints are infeasible".into()));
        }
        p.feasible = Some(center.0);
        Ok(p)
    }

    /// Builds a polytope whose nonemptiness the caller guarantees.
    pub fn unchecked(
        normals: Vec<Point>,
        offsets: Vec<f64>,
        lower: Point,
        upper: Point,
    ) -> Result<Self> {
        let d = lower.len();
        if upper.len() != d {
            return Err(Error::Dimension {
                expected: d,
                found: upper.len(),
            });
        }
        if normals.len() != offsets.len() {
            return Err(Error::validation(
                "polytope",
                "one offset is required per normal",
            ));
        }
        for a in &normals {
            if a.len() != d {
                return Err(Error::Dimension {
                    expected: d,
                    found: a.len(),
                });
            }
            if norm(a) == 0.0 {
                return Err(Error::validation("polytope", "zero normal vector"));
            }
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::validation(
                "polytope",
                "bounding box has lower > upper",
            ));
        }
        Ok(HPolytope {
            normals,
            offsets,
            lower,
            upper,
            feasible: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// All constraint rows including the bounding box faces.
    pub fn rows(&self) -> Vec<(Point, f64)> {
        let d = self.dim();
        let mut rows: Vec<(Point, f64)> = self
            .normals
            .iter()
            .cloned()
            .zip(self.offsets.iter().copied())
            .collect();
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            rows.push((e.clone(), self.upper[i]));
            e[i] = -1.0;
            rows.push((e, -self.lower[i]));
        }
        rows
    }

    pub(crate) fn primitives(&self) -> Vec<Primitive<'_>> {
        let mut parts: Vec<Primitive<'_>> = self
            .normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| Primitive::Halfspace(a, *b))
            .collect();
        parts.push(Primitive::Box(&self.lower, &self.upper));
        parts
    }

    /// Maximizes `dir·x` over the polytope.
    fn support(&self, dir: &[f64]) -> Result<(f64, Point)> {
        // shift x = lower + u with u >= 0
        let d = self.dim();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (a, b) in self.normals.iter().zip(&self.offsets) {
            rows.push(a.clone());
            rhs.push(b - dot(a, &self.lower));
        }
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            rows.push(e);
            rhs.push(self.upper[i] - self.lower[i]);
        }
        match LinearProgram::new(dir.to_vec(), rows, rhs).solve()? {
            LpOutcome::Optimal { x, value } => {
                let point: Point = x.iter().zip(&self.lower).map(|(u, l)| u + l).collect();
                Ok((value + dot(dir, &self.lower), point))
            }
            LpOutcome::Infeasible => Err(Error::EmptySet("polytope is empty".into())),
            LpOutcome::Unbounded => Err(Error::Unsupported("unbounded polytope".into())),
        }
    }

    /// Largest inscribed ball. An infeasible polytope reports radius -1.
    fn chebyshev(&self) -> Result<(Point, f64)> {
        let d = self.dim();
        // variables: u (d) >= 0 shifted center, r >= 0
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (a, b) in self.normals.iter().zip(&self.offsets) {
            let mut row = a.clone();
            row.push(norm(a));
            rows.push(row);
            rhs.push(b - dot(a, &self.lower));
        }
        for i in 0..d {
            let mut row = vec![0.0; d + 1];
            row[i] = 1.0;
            row[d] = 1.0;
            rows.push(row);
            rhs.push(self.upper[i] - self.lower[i]);
            let mut row = vec![0.0; d + 1];
            row[i] = -1.0;
            row[d] = 1.0;
            rows.push(row);
            rhs.push(0.0);
        }
        let mut objective = vec![0.0; d + 1];
        objective[d] = 1.0;
        match LinearProgram::new(objective, rows, rhs).solve()? {
            LpOutcome::Optimal { x, value } => {
                let c = x[..d].iter().zip(&self.lower).map(|(u, l)| u + l).collect();
                Ok((c, value))
            }
            LpOutcome::Infeasible => Ok((self.lower.clone(), -1.0)),
            LpOutcome::Unbounded => Err(Error::Unsupported("unbounded polytope".into())),
        }
    }

    fn vertices(&self, cap: usize) -> Result<Vec<Point>> {
        let d = self.dim();
        let rows = self.rows();
        let m = rows.len();
        let mut out: Vec<Point> = Vec::new();
        let mut idx: Vec<usize> = (0..d).collect();
        let mut combos = 0usize;
        if m < d {
            return Ok(out);
        }
        loop {
            combos += 1;
            if combos > 2_000_000 {
                return Err(Error::Unsupported(
                    "vertex enumeration exceeds the combination budget".into(),
                ));
            }
            let a = nalgebra::DMatrix::from_fn(d, d, |i, j| rows[idx[i]].0[j]);
            let b = nalgebra::DVector::from_fn(d, |i, _| rows[idx[i]].1);
            if let Some(sol) = a.lu().solve(&b) {
                let v: Point = sol.iter().copied().collect();
                let feasible = rows
                    .iter()
                    .all(|(a, b)| dot(a, &v) <= b + 1e-9 * (1.0 + b.abs()));
                if feasible
                    && v.iter().all(|x| x.is_finite())
                    && !out.iter().any(|w| dist(w, &v) < 1e-9)
                {
                    out.push(v);
                    if out.len() > cap {
                        return Err(Error::Unsupported(format!(
                            "polytope has more than {cap} extreme points"
                        )));
                    }
                }
            }
            if !next_combination(&mut idx, m) {
                return Ok(out);
            }
        }
    }
}

/// Largest number of active sets tried before falling back to Dykstra.
const MAX_ACTIVE_SETS: usize = 20_000;

fn binomial_sum(m: usize, d: usize) -> usize {
    let mut total = 0usize;
    let mut c = 1usize;
    for k in 0..=d.min(m) {
        total = total.saturating_add(c);
        c = c.saturating_mul(m - k) / (k + 1);
    }
    total
}

/// Exact projection onto `{y | a_i·y <= b_i}` by enumerating active sets of
/// at most `d` rows and returning the first KKT point. `None` when there are
/// too many rows to enumerate or no KKT point passes the tolerances.
fn project_active_set(x: &[f64], rows: &[(Point, f64)]) -> Option<Point> {
    let d = x.len();
    let m = rows.len();
    if binomial_sum(m, d) > MAX_ACTIVE_SETS {
        return None;
    }
    let rows: Vec<(Point, f64)> = rows
        .iter()
        .filter_map(|(a, b)| {
            let n = norm(a);
            (n > 0.0).then(|| (a.iter().map(|v| v / n).collect(), b / n))
        })
        .collect();
    let m = rows.len();
    let scale = 1.0 + norm(x);
    let feasible = |y: &[f64]| rows.iter().all(|(a, b)| dot(a, y) - b <= 1e-11 * (scale + b.abs()));
    if feasible(x) {
        return Some(x.to_vec());
    }
    for k in 1..=d.min(m) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let gram = nalgebra::DMatrix::from_fn(k, k, |i, j| dot(&rows[idx[i]].0, &rows[idx[j]].0));
            let rhs = nalgebra::DVector::from_fn(k, |i, _| dot(&rows[idx[i]].0, x) - rows[idx[i]].1);
            if gram.determinant().abs() > 1e-12 {
                if let Some(ch) = gram.cholesky() {
                    let lambda = ch.solve(&rhs);
                    if lambda.iter().all(|l| *l >= -1e-12) {
                        let mut y = x.to_vec();
                        for (i, &r) in idx.iter().enumerate() {
                            for j in 0..d {
                                y[j] -= lambda[i] * rows[r].0[j];
                            }
                        }
                        if feasible(&y) {
                            return Some(y);
                        }
                    }
                }
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    None
}

fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let d = idx.len();
    let mut i = d;
    while i > 0 {
        i -= 1;
        if idx[i] < m - d + i {
            idx[i] += 1;
            for j in (i + 1)..d {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl ConvexSet {
    pub fn boxed(lower: Point, upper: Point) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Dimension {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if let Some(i) = (0..lower.len()).find(|&i| lower[i] > upper[i]) {
            return Err(Error::EmptySet(format!(
                "box bound {i}: lower {} > upper {}",
                lower[i], upper[i]
            )));
        }
        Ok(ConvexSet::Box { lower, upper })
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::EmptySet(format!("ball radius {radius} < 0")));
        }
        Ok(ConvexSet::Ball { center, radius })
    }

    pub fn point(p: Point) -> Self {
        ConvexSet::Box {
            lower: p.clone(),
            upper: p,
        }
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::boxed(vec![lo], vec![hi])
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Box { lower, .. } => lower.len(),
            ConvexSet::Ball { center, .. } => center.len(),
            ConvexSet::Polytope(p) => p.dim(),
        }
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        match self {
            ConvexSet::Box { lower, upper } => (lower.clone(), upper.clone()),
            ConvexSet::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            ConvexSet::Polytope(p) => (p.lower.clone(), p.upper.clone()),
        }
    }

    /// `[lo, hi]` for one-dimensional sets.
    pub fn as_interval(&self) -> Option<(f64, f64)> {
        if self.dim() != 1 {
            return None;
        }
        Some(match self {
            ConvexSet::Box { lower, upper } => (lower[0], upper[0]),
            ConvexSet::Ball { center, radius } => (center[0] - radius, center[0] + radius),
            ConvexSet::Polytope(p) => {
                let (mut lo, mut hi) = (p.lower[0], p.upper[0]);
                for (a, b) in p.normals.iter().zip(&p.offsets) {
                    if a[0] > 0.0 {
                        hi = hi.min(b / a[0]);
                    } else {
                        lo = lo.max(b / a[0]);
                    }
                }
                (lo, hi)
            }
        })
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        match self {
            ConvexSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol),
            ConvexSet::Ball { center, radius } => dist(center, x) <= radius + tol,
            ConvexSet::Polytope(p) => p
                .rows()
                .iter()
                .all(|(a, b)| (dot(a, x) - b) / norm(a) <= tol),
        }
    }

    /// Metric projection onto the set.
    pub fn project(&self, x: &[f64]) -> Result<Point> {
        match self {
            ConvexSet::Box { lower, upper } => Ok(x
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(v, (l, u))| v.clamp(*l, *u))
                .collect()),
            ConvexSet::Ball { center, radius } => Ok(dykstra::project_ball(center, *radius, x)),
            ConvexSet::Polytope(p) => {
                if let Some((lo, hi)) = self.as_interval() {
                    if lo > hi + TOL_GEOM {
                        return Err(Error::EmptySet("polytope is empty".into()));
                    }
                    return Ok(vec![x[0].clamp(lo, hi.max(lo))]);
                }
                if self.contains(x, 0.0) {
                    return Ok(x.to_vec());
                }
                if let Some(y) = project_active_set(x, &p.rows()) {
                    return Ok(y);
                }
                Ok(dykstra::project(x, &p.primitives(), TOL_GEOM)?.point)
            }
        }
    }

    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        match self {
            ConvexSet::Ball { center, radius } => Ok((dist(center, x) - radius).max(0.0)),
            _ => Ok(dist(&self.project(x)?, x)),
        }
    }

    /// Support function value `max_{x in S} dir·x` and a maximizer.
    pub fn support(&self, dir: &[f64]) -> Result<(f64, Point)> {
        match self {
            ConvexSet::Box { lower, upper } => {
                let p: Point = dir
                    .iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(a, (l, u))| if *a >= 0.0 { *u } else { *l })
                    .collect();
                Ok((dot(dir, &p), p))
            }
            ConvexSet::Ball { center, radius } => {
                let n = norm(dir);
                let p: Point = if n == 0.0 {
                    center.clone()
                } else {
                    center
                        .iter()
                        .zip(dir)
                        .map(|(c, a)| c + radius * a / n)
                        .collect()
                };
                Ok((dot(dir, center) + radius * n, p))
            }
            ConvexSet::Polytope(p) => p.support(dir),
        }
    }

    /// Halfspace rows `(a, b)` describing the set, for boxes and polytopes.
    pub fn constraint_rows(&self) -> Option<Vec<(Point, f64)>> {
        match self {
            ConvexSet::Box { lower, upper } => {
                let d = lower.len();
                let mut rows = Vec::with_capacity(2 * d);
                for i in 0..d {
                    let mut e = vec![0.0; d];
                    e[i] = 1.0;
                    rows.push((e.clone(), upper[i]));
                    e[i] = -1.0;
                    rows.push((e, -lower[i]));
                }
                Some(rows)
            }
            ConvexSet::Ball { .. } => None,
            ConvexSet::Polytope(p) => Some(p.rows()),
        }
    }

    /// Extreme points for boxes and polytopes. Balls return the center when
    /// degenerate and otherwise points along a fixed direction catalog.
    pub fn extreme_points(&self) -> Result<Vec<Point>> {
        match self {
            ConvexSet::Box { lower, upper } => {
                let d = lower.len();
                let free: Vec<usize> = (0..d).filter(|&i| upper[i] > lower[i]).collect();
                if free.len() > 8 {
                    return Err(Error::Unsupported(format!(
                        "box with {} nondegenerate sides has more than {MAX_VERTICES} corners",
                        free.len()
                    )));
                }
                let mut out = Vec::with_capacity(1 << free.len());
                for mask in 0..(1usize << free.len()) {
                    let mut v = lower.clone();
                    for (bit, &i) in free.iter().enumerate() {
                        if mask & (1 << bit) != 0 {
                            v[i] = upper[i];
                        }
                    }
                    out.push(v);
                }
                Ok(out)
            }
            ConvexSet::Ball { center, radius } => {
                if *radius == 0.0 {
                    return Ok(vec![center.clone()]);
                }
                Ok(crate::linalg::direction_catalog(center.len(), 8)
                    .into_iter()
                    .map(|u| center.iter().zip(&u).map(|(c, v)| c + radius * v).collect())
                    .collect())
            }
            ConvexSet::Polytope(p) => p.vertices(MAX_VERTICES),
        }
    }

    /// Uniform draws from the inflated bounding box projected onto the set.
    pub fn projection_samples<R: Rng>(&self, rng: &mut R, count: usize) -> Result<Vec<Point>> {
        let (lo, hi) = self.bounding_box();
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

    /// Center and radius of a largest inscribed ball.
    pub fn chebyshev_center(&self) -> Result<(Point, f64)> {
        match self {
            ConvexSet::Box { lower, upper } => {
                let c = lower
                    .iter()
                    .zip(upper)
                    .map(|(l, u)| 0.5 * (l + u))
                    .collect();
                let r = lower
                    .iter()
                    .zip(upper)
                    .map(|(l, u)| 0.5 * (u - l))
                    .fold(f64::INFINITY, f64::min);
                Ok((c, r))
            }
            ConvexSet::Ball { center, radius } => Ok((center.clone(), *radius)),
            ConvexSet::Polytope(p) => {
                let (c, r) = p.chebyshev()?;
                if r < 0.0 {
                    return Err(Error::EmptySet("polytope is empty".into()));
                }
                Ok((c, r))
            }
        }
    }

    pub fn is_solid(&self, tol: f64) -> Result<bool> {
        Ok(self.chebyshev_center()?.1 > tol)
    }
}

/// Metric projection of `x` onto `set`.
pub fn project(set: &ConvexSet, x: &[f64]) -> Result<Point> {
    set.project(x)
}

pub fn distance(set: &ConvexSet, x: &[f64]) -> Result<f64> {
    set.distance(x)
}

pub fn chebyshev_center(set: &ConvexSet) -> Result<(Point, f64)> {
    set.chebyshev_center()
}

/// Decides `inner ⊆ outer` up to `tol`.
///
/// Against boxes and polytopes the support function of `inner` is compared
/// with every constraint row of `outer`; against balls every extreme point of
/// `inner` is tested.
pub fn support_and_contains(inner: &ConvexSet, outer: &ConvexSet, tol: f64) -> Result<Containment> {
    if let Some(rows) = outer.constraint_rows() {
        for (a, b) in rows {
            let n = norm(&a);
            let (h, arg) = inner.support(&a)?;
            if (h - b) / n > tol {
                return Ok(Containment {
                    contained: false,
                    witness: Some(arg),
                });
            }
        }
        return Ok(Containment {
            contained: true,
            witness: None,
        });
    }
    let ConvexSet::Ball { center, radius } = outer else {
        unreachable!("only balls lack constraint rows");
    };
    if let ConvexSet::Ball {
        center: c,
        radius: r,
    } = inner
    {
        let gap = dist(c, center);
        if gap + r <= radius + tol {
            return Ok(Containment {
                contained: true,
                witness: None,
            });
        }
        let dir: Point = if gap > 0.0 {
            c.iter().zip(center).map(|(a, b)| (a - b) / gap).collect()
        } else {
            crate::linalg::unit(c.len(), 0)
        };
        let w = c.iter().zip(&dir).map(|(a, u)| a + r * u).collect();
        return Ok(Containment {
            contained: false,
            witness: Some(w),
        });
    }
    for v in inner.extreme_points()? {
        if dist(&v, center) > radius + tol {
            return Ok(Containment {
                contained: false,
                witness: Some(v),
            });
        }
    }
    Ok(Containment {
        contained: true,
        witness: None,
    })
}

/// Mutual containment within `tol`.
pub fn sets_equal(a: &ConvexSet, b: &ConvexSet, tol: f64) -> Result<bool> {
    Ok(support_and_contains(a, b, tol)?.contained && support_and_contains(b, a, tol)?.contained)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex() -> ConvexSet {
        ConvexSet::Polytope(
            HPolytope::new(
                vec![vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 0.0],
                vec![1.0, 1.0],
            )
            .unwrap(),
        )
    }

    #[test]
    fn projection_examples() {
        let ball = ConvexSet::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(ball.project(&[2.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        let unit_box = ConvexSet::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(unit_box.project(&[-1.0, 0.5]).unwrap(), vec![0.0, 0.5]);
        let p = simplex().project(&[1.0, 1.0]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn distance_examples() {
        let ball = ConvexSet::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(ball.distance(&[2.0, 0.0]).unwrap(), 1.0);
        assert_eq!(ball.distance(&[0.3, 0.2]).unwrap(), 0.0);
        assert_eq!(simplex().distance(&[0.2, 0.2]).unwrap(), 0.0);
    }

    #[test]
    fn containment_examples() {
        let inner = ConvexSet::interval(0.0, 1.0).unwrap();
        let outer = ConvexSet::interval(-1.0, 2.0).unwrap();
        assert!(
            support_and_contains(&inner, &outer, TOL_GEOM)
                .unwrap()
                .contained
        );

        let s = ConvexSet::interval(2.0, 3.0).unwrap();
        let t = ConvexSet::interval(0.0, 1.0).unwrap();
        let c = support_and_contains(&s, &t, TOL_GEOM).unwrap();
        assert!(!c.contained);
        let w = c.witness.unwrap();
        assert!(w == vec![2.0] || w == vec![3.0]);
        assert!(t.distance(&w).unwrap() > TOL_GEOM);

        let ball = ConvexSet::ball(vec![0.0, 0.0], 1.0).unwrap();
        let half = ConvexSet::Polytope(
            HPolytope::new(
                vec![vec![1.0, 0.0]],
                vec![0.5],
                vec![-2.0, -2.0],
                vec![2.0, 2.0],
            )
            .unwrap(),
        );
        let c = support_and_contains(&ball, &half, TOL_GEOM).unwrap();
        assert!(!c.contained);
        let w = c.witness.unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && w[1].abs() < 1e-12);
    }

    #[test]
    fn containment_in_ball() {
        let outer = ConvexSet::ball(vec![0.0, 0.0], 1.0).unwrap();
        let small = ConvexSet::boxed(vec![-0.5, -0.5], vec![0.5, 0.5]).unwrap();
        assert!(
            support_and_contains(&small, &outer, TOL_GEOM)
                .unwrap()
                .contained
        );
        let big = ConvexSet::boxed(vec![-0.8, -0.8], vec![0.8, 0.8]).unwrap();
        let c = support_and_contains(&big, &outer, TOL_GEOM).unwrap();
        assert!(!c.contained);
        assert!(outer.distance(&c.witness.unwrap()).unwrap() > TOL_GEOM);
        assert!(
            support_and_contains(&simplex(), &outer, TOL_GEOM)
                .unwrap()
                .contained
        );
    }

    #[test]
    fn chebyshev_examples() {
        let b = ConvexSet::boxed(vec![0.0, 0.0], vec![2.0, 2.0]).unwrap();
        assert_eq!(b.chebyshev_center().unwrap(), (vec![1.0, 1.0], 1.0));
        let ball = ConvexSet::ball(vec![0.5, -1.0], 0.25).unwrap();
        assert_eq!(ball.chebyshev_center().unwrap(), (vec![0.5, -1.0], 0.25));
        let flat = ConvexSet::boxed(vec![0.0, 0.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(flat.chebyshev_center().unwrap().1, 0.0);
        assert!(!flat.is_solid(TOL_GEOM).unwrap());
        // unit simplex inradius 1 / (2 + sqrt 2)
        let (c, r) = simplex().chebyshev_center().unwrap();
        let expected = 1.0 / (2.0 + 2f64.sqrt());
        assert!((r - expected).abs() < 1e-12);
        assert!((c[0] - expected).abs() < 1e-12 && (c[1] - expected).abs() < 1e-12);
    }

    #[test]
    fn polytope_vertices_and_support() {
        let v = simplex().extreme_points().unwrap();
        assert_eq!(v.len(), 3);
        let (h, arg) = simplex().support(&[1.0, 2.0]).unwrap();
        assert!((h - 2.0).abs() < 1e-12);
        assert!(dist(&arg, &[0.0, 1.0]) < 1e-12);
    }

    #[test]
    fn empty_constructions_fail() {
        assert!(ConvexSet::interval(1.0, 0.0).is_err());
        assert!(ConvexSet::ball(vec![0.0], -1.0).is_err());
        assert!(HPolytope::new(
            vec![vec![1.0], vec![-1.0]],
            vec![0.0, -1.0],
            vec![-5.0],
            vec![5.0]
        )
        .is_err());
    }
}
