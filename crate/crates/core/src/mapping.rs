//! Piecewise-parametric set-valued mappings `t ↦ Γ_t` on `[0, T]`.
//!
//! Parameters are càdlàg piecewise-affine coefficient functions, so the
//! left-limit mapping is available exactly: it is the family evaluated at the
//! coefficients' left limits. Isolated overrides redefine single values and
//! are invisible to left limits.

use crate::coefficient::CoefficientFunction;
use crate::convex::{ConvexSet, HPolytope};
use crate::error::{Error, Result};
use crate::linalg::{zeros, Point};
use crate::region::Region;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Box {
        lower: Vec<CoefficientFunction>,
        upper: Vec<CoefficientFunction>,
    },
    Ball {
        center: Vec<CoefficientFunction>,
        radius: CoefficientFunction,
    },
    /// Fixed normals, moving offsets, fixed bounding box.
    Polytope {
        normals: Vec<Point>,
        offsets: Vec<CoefficientFunction>,
        lower: Point,
        upper: Point,
    },
    /// The singleton `{sin(1/(e - t))}` on a piece ending at `e`; it has no
    /// left limit at `e`. One-dimensional only.
    Oscillator,
}

impl Family {
    pub fn kind(&self) -> &'static str {
        match self {
            Family::Box { .. } => "box",
            Family::Ball { .. } => "ball",
            Family::Polytope { .. } => "polytope",
            Family::Oscillator => "oscillator",
        }
    }

    fn coefficients(&self) -> Vec<&CoefficientFunction> {
        match self {
            Family::Box { lower, upper } => lower.iter().chain(upper).collect(),
            Family::Ball { center, radius } => center.iter().chain([radius]).collect(),
            Family::Polytope { offsets, .. } => offsets.iter().collect(),
            Family::Oscillator => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub family: Family,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub time: f64,
    pub set: ConvexSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetValuedMapping {
    pub dim: usize,
    pub horizon: f64,
    pub pieces: Vec<Piece>,
    pub overrides: Vec<Override>,
}

/// Read access shared by stored mappings and the lazily built ones derived
/// from them (restrictions to a ball, intersections with fattenings).
pub trait SetMap: Sync {
    fn dim(&self) -> usize;
    fn horizon(&self) -> f64;
    /// Sorted times in `(0, T]` where the value may fail to be continuous,
    /// always including `T`.
    fn breakpoints(&self) -> Vec<f64>;
    fn region(&self, t: f64) -> Result<Region>;
    /// The left-limit set; `None` when it is empty.
    fn left_region(&self, t: f64) -> Result<Option<Region>>;
    fn bounding_box(&self) -> (Point, Point);
    /// Bound on the speed of the parameters between breakpoints.
    fn lipschitz(&self) -> f64;
}

fn same_time(a: f64, b: f64, horizon: f64) -> bool {
    (a - b).abs() <= 4.0 * f64::EPSILON * horizon.max(1.0)
}

impl SetValuedMapping {
    pub fn new(
        dim: usize,
        horizon: f64,
        pieces: Vec<Piece>,
        overrides: Vec<Override>,
    ) -> Result<Self> {
        let m = SetValuedMapping {
            dim,
            horizon,
            pieces,
            overrides,
        };
        m.validate()?;
        Ok(m)
    }

    /// Single piece on `[0, T]`.
    pub fn single(dim: usize, horizon: f64, family: Family) -> Result<Self> {
        Self::new(dim, horizon, vec![Piece { start: 0.0, family }], Vec::new())
    }

    pub fn constant(set: ConvexSet, horizon: f64) -> Result<Self> {
        let c = |v: f64| CoefficientFunction::constant(v, horizon);
        let dim = set.dim();
        let family = match set {
            ConvexSet::Box { lower, upper } => Family::Box {
                lower: lower.into_iter().map(c).collect(),
                upper: upper.into_iter().map(c).collect(),
            },
            ConvexSet::Ball { center, radius } => Family::Ball {
                center: center.into_iter().map(c).collect(),
                radius: c(radius),
            },
            ConvexSet::Polytope(p) => Family::Polytope {
                normals: p.normals,
                offsets: p.offsets.into_iter().map(c).collect(),
                lower: p.lower,
                upper: p.upper,
            },
        };
        Self::single(dim, horizon, family)
    }

    fn piece_end(&self, i: usize) -> f64 {
        self.pieces.get(i + 1).map_or(self.horizon, |p| p.start)
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.horizon) {
            return Err(Error::validation(
                "time",
                format!("{t} lies outside [0, {}]", self.horizon),
            ));
        }
        Ok(())
    }

    /// The value of a family with coefficients read by `coef`.
    fn build(&self, family: &Family, t: f64, end: f64, left: bool) -> Result<Option<ConvexSet>> {
        let read = |f: &CoefficientFunction| if left { f.left_limit(t) } else { f.value(t) };
        let empty = |reason: String| Error::EmptyValue { t, reason };
        Ok(Some(match family {
            Family::Box { lower, upper } => {
                let lo: Point = lower.iter().map(read).collect();
                let hi: Point = upper.iter().map(read).collect();
                if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
                    return Err(empty(format!(
                        "lower bound {} exceeds upper bound {} in coordinate {i}",
                        lo[i], hi[i]
                    )));
                }
                ConvexSet::Box {
                    lower: lo,
                    upper: hi,
                }
            }
            Family::Ball { center, radius } => {
                let r = read(radius);
                if r < 0.0 {
                    return Err(empty(format!("negative radius {r}")));
                }
                ConvexSet::Ball {
                    center: center.iter().map(read).collect(),
                    radius: r,
                }
            }
            Family::Polytope {
                normals,
                offsets,
                lower,
                upper,
            } => ConvexSet::Polytope(HPolytope::unchecked(
                normals.clone(),
                offsets.iter().map(read).collect(),
                lower.clone(),
                upper.clone(),
            )?),
            Family::Oscillator => {
                if t >= end {
                    if left {
                        return Ok(None);
                    }
                    return Err(empty("oscillating piece has no value at its right end".into()));
                }
                ConvexSet::point(vec![(1.0 / (end - t)).sin()])
            }
        }))
    }

    /// `Γ_t`, honoring overrides.
    pub fn evaluate(&self, t: f64) -> Result<ConvexSet> {
        self.check_time(t)?;
        if let Some(o) = self
            .overrides
            .iter()
            .find(|o| same_time(o.time, t, self.horizon))
        {
            return Ok(o.set.clone());
        }
        let i = self.pieces.partition_point(|p| p.start <= t).max(1) - 1;
        Ok(self
            .build(&self.pieces[i].family, t, self.piece_end(i), false)?
            .expect("right values are never empty"))
    }

    /// `v⃗Γ_t`, with `v⃗Γ_0 = {0}`; `None` when the left limit is empty.
    pub fn left_limit(&self, t: f64) -> Result<Option<ConvexSet>> {
        self.check_time(t)?;
        if t == 0.0 {
            return Ok(Some(ConvexSet::point(zeros(self.dim))));
        }
        let i = self.pieces.partition_point(|p| p.start < t).max(1) - 1;
        self.build(&self.pieces[i].family, t, self.piece_end(i), true)
    }

    pub fn validate(&self) -> Result<()> {
        let ctx = "mapping";
        if self.dim == 0 {
            return Err(Error::validation(ctx, "dimension must be positive"));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::validation(
                ctx,
                "horizon must be positive and finite",
            ));
        }
        if self.pieces.is_empty() {
            return Err(Error::validation(ctx, "at least one piece is required"));
        }
        if self.pieces[0].start != 0.0 {
            return Err(Error::validation(ctx, "the first piece must start at 0"));
        }
        if self.pieces.windows(2).any(|w| !(w[0].start < w[1].start)) {
            return Err(Error::validation(
                ctx,
                "piece starts must be strictly increasing",
            ));
        }
        if self.pieces.last().is_some_and(|p| p.start >= self.horizon) {
            return Err(Error::validation(
                ctx,
                "every piece must start before the horizon",
            ));
        }
        for (i, piece) in self.pieces.iter().enumerate() {
            let pctx = format!("piece {i} ({})", piece.family.kind());
            let dims = match &piece.family {
                Family::Box { lower, upper } => vec![lower.len(), upper.len()],
                Family::Ball { center, .. } => vec![center.len()],
                Family::Polytope {
                    normals,
                    offsets,
                    lower,
                    upper,
                } => {
                    if normals.len() != offsets.len() {
                        return Err(Error::validation(pctx, "one offset is required per normal"));
                    }
                    let mut d: Vec<usize> = normals.iter().map(Vec::len).collect();
                    d.extend([lower.len(), upper.len()]);
                    d
                }
                Family::Oscillator => vec![1],
            };
            if let Some(&bad) = dims.iter().find(|&&n| n != self.dim) {
                return Err(Error::validation(
                    pctx,
                    format!(
                        "dimension {bad} does not match mapping dimension {}",
                        self.dim
                    ),
                ));
            }
            for f in piece.family.coefficients() {
                f.validate()
                    .map_err(|e| Error::validation(pctx.clone(), e.to_string()))?;
                if !same_time(f.horizon(), self.horizon, self.horizon) {
                    return Err(Error::validation(
                        pctx,
                        format!(
                            "coefficient horizon {} differs from mapping horizon {}",
                            f.horizon(),
                            self.horizon
                        ),
                    ));
                }
            }
        }
        for o in &self.overrides {
            self.check_time(o.time)?;
            if o.set.dim() != self.dim {
                return Err(Error::Dimension {
                    expected: self.dim,
                    found: o.set.dim(),
                });
            }
        }
        // Between consecutive knots every family is affine in t with a convex
        // graph, so nonemptiness at both ends of each sub-interval suffices.
        let mut times = vec![0.0];
        times.extend(self.knots());
        for &t in &times {
            let value = self.evaluate(t)?;
            certify(&value, t)?;
            if t > 0.0 {
                if let Some(left) = self.left_limit(t)? {
                    certify(&left, t)?;
                }
            }
        }
        Ok(())
    }

    /// Piece starts, coefficient breakpoints, override times and `T`.
    fn knots(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.pieces.iter().skip(1).map(|p| p.start).collect();
        for p in &self.pieces {
            for f in p.family.coefficients() {
                out.extend(
                    f.knots()
                        .iter()
                        .copied()
                        .filter(|&t| t > 0.0 && t <= self.horizon),
                );
            }
        }
        out.extend(self.overrides.iter().map(|o| o.time).filter(|&t| t > 0.0));
        out.push(self.horizon);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| same_time(*a, *b, self.horizon));
        out
    }
}

fn certify(set: &ConvexSet, t: f64) -> Result<()> {
    if let ConvexSet::Polytope(p) = set {
        HPolytope::new(
            p.normals.clone(),
            p.offsets.clone(),
            p.lower.clone(),
            p.upper.clone(),
        )
        .map_err(|e| Error::empty_value(t, e.to_string()))?;
    }
    Ok(())
}

impl SetMap for SetValuedMapping {
    fn dim(&self) -> usize {
        self.dim
    }

    fn horizon(&self) -> f64 {
        self.horizon
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.knots()
    }

    fn region(&self, t: f64) -> Result<Region> {
        Ok(self.evaluate(t)?.into())
    }

    fn left_region(&self, t: f64) -> Result<Option<Region>> {
        Ok(self.left_limit(t)?.map(Region::from))
    }

    fn bounding_box(&self) -> (Point, Point) {
        let d = self.dim;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        let mut widen = |a: &[f64], b: &[f64]| {
            for i in 0..d {
                lo[i] = lo[i].min(a[i]);
                hi[i] = hi[i].max(b[i]);
            }
        };
        for p in &self.pieces {
            match &p.family {
                Family::Box { lower, upper } => {
                    let a: Point = lower.iter().map(|f| f.range().0).collect();
                    let b: Point = upper.iter().map(|f| f.range().1).collect();
                    widen(&a, &b);
                }
                Family::Ball { center, radius } => {
                    let r = radius.range().1;
                    let a: Point = center.iter().map(|f| f.range().0 - r).collect();
                    let b: Point = center.iter().map(|f| f.range().1 + r).collect();
                    widen(&a, &b);
                }
                Family::Polytope { lower, upper, .. } => widen(lower, upper),
                Family::Oscillator => widen(&[-1.0], &[1.0]),
            }
        }
        for o in &self.overrides {
            let (a, b) = o.set.bounding_box();
            widen(&a, &b);
        }
        (lo, hi)
    }

    fn lipschitz(&self) -> f64 {
        let mut l = 0.0f64;
        for p in &self.pieces {
            if matches!(p.family, Family::Oscillator) {
                return f64::INFINITY;
            }
            for f in p.family.coefficients() {
                l = l.max(f.lipschitz());
            }
        }
        l
    }
}

/// `distance(Γ_t, x) < ε`.
pub fn fattened_membership<M: SetMap + ?Sized>(m: &M, t: f64, x: &[f64], eps: f64) -> Result<bool> {
    Ok(m.region(t)?.distance(x)? < eps)
}

/// `φ_t = Γ_t ∩ B̄(center, radius)` for `t ∈ [a, b]` and `Γ_t` elsewhere.
pub struct Restricted<'a> {
    pub inner: &'a dyn SetMap,
    pub center: Point,
    pub radius: f64,
    pub a: f64,
    pub b: f64,
}

impl SetMap for Restricted<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn horizon(&self) -> f64 {
        self.inner.horizon()
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut out = self.inner.breakpoints();
        out.extend([self.a, self.b].into_iter().filter(|&t| t > 0.0));
        out.sort_by(f64::total_cmp);
        out.dedup_by(|x, y| same_time(*x, *y, self.horizon()));
        out
    }

    fn region(&self, t: f64) -> Result<Region> {
        let r = self.inner.region(t)?;
        Ok(if t >= self.a && t <= self.b {
            r.with_ball(self.center.clone(), self.radius)
        } else {
            r
        })
    }

    fn left_region(&self, t: f64) -> Result<Option<Region>> {
        let Some(r) = self.inner.left_region(t)? else {
            return Ok(None);
        };
        if !(t > self.a && t <= self.b) {
            return Ok(Some(r));
        }
        let r = r.with_ball(self.center.clone(), self.radius);
        Ok((!r.is_empty()?).then_some(r))
    }

    fn bounding_box(&self) -> (Point, Point) {
        self.inner.bounding_box()
    }

    fn lipschitz(&self) -> f64 {
        self.inner.lipschitz()
    }
}

/// `t ↦ Γ¹_t ∩ (Γ²_t + ε B̄)`.
pub struct Intersected<'a> {
    pub first: &'a SetValuedMapping,
    pub second: &'a SetValuedMapping,
    pub eps: f64,
}

impl SetMap for Intersected<'_> {
    fn dim(&self) -> usize {
        self.first.dim
    }

    fn horizon(&self) -> f64 {
        self.first.horizon
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut out = self.first.knots();
        out.extend(self.second.knots());
        out.sort_by(f64::total_cmp);
        out.dedup_by(|x, y| same_time(*x, *y, self.horizon()));
        out
    }

    fn region(&self, t: f64) -> Result<Region> {
        let r =
            Region::from(self.first.evaluate(t)?).with_fattened(self.second.evaluate(t)?, self.eps);
        if r.is_empty()? {
            return Err(Error::empty_value(
                t,
                "the intersection with the fattened second mapping is empty",
            ));
        }
        Ok(r)
    }

    fn left_region(&self, t: f64) -> Result<Option<Region>> {
        let (Some(a), Some(b)) = (self.first.left_limit(t)?, self.second.left_limit(t)?) else {
            return Ok(None);
        };
        let r = Region::from(a).with_fattened(b, self.eps);
        Ok((!r.is_empty()?).then_some(r))
    }

    fn bounding_box(&self) -> (Point, Point) {
        self.first.bounding_box()
    }

    fn lipschitz(&self) -> f64 {
        self.first.lipschitz().max(self.second.lipschitz())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::sets_equal;

    fn step() -> SetValuedMapping {
        let c = |v| CoefficientFunction::constant(v, 1.0);
        SetValuedMapping::new(
            1,
            1.0,
            vec![
                Piece {
                    start: 0.0,
                    family: Family::Box {
                        lower: vec![c(0.0)],
                        upper: vec![c(1.0)],
                    },
                },
                Piece {
                    start: 0.5,
                    family: Family::Box {
                        lower: vec![c(2.0)],
                        upper: vec![c(3.0)],
                    },
                },
            ],
            Vec::new(),
        )
        .unwrap()
    }

    #[test]
    fn step_values_and_left_limits() {
        let m = step();
        assert_eq!(
            m.evaluate(0.5).unwrap(),
            ConvexSet::interval(2.0, 3.0).unwrap()
        );
        assert_eq!(
            m.evaluate(0.49).unwrap(),
            ConvexSet::interval(0.0, 1.0).unwrap()
        );
        assert_eq!(
            m.left_limit(0.5).unwrap().unwrap(),
            ConvexSet::interval(0.0, 1.0).unwrap()
        );
        assert_eq!(
            m.left_limit(0.0).unwrap().unwrap(),
            ConvexSet::point(vec![0.0])
        );
        assert_eq!(m.breakpoints(), vec![0.5, 1.0]);
    }

    #[test]
    fn interior_left_limit_equals_value() {
        let m = SetValuedMapping::single(
            2,
            1.0,
            Family::Ball {
                center: vec![
                    CoefficientFunction::affine(0.0, 0.5, 1.0),
                    CoefficientFunction::affine(0.0, 0.25, 1.0),
                ],
                radius: CoefficientFunction::constant(0.1, 1.0),
            },
        )
        .unwrap();
        for t in [0.1, 0.37, 0.999, 1.0] {
            let a = m.evaluate(t).unwrap();
            let b = m.left_limit(t).unwrap().unwrap();
            assert!(sets_equal(&a, &b, 1e-9).unwrap());
        }
    }

    #[test]
    fn crossing_bounds_are_rejected() {
        let err = SetValuedMapping::single(
            1,
            1.0,
            Family::Box {
                lower: vec![CoefficientFunction::affine(0.0, 1.0, 1.0)],
                upper: vec![CoefficientFunction::constant(0.5, 1.0)],
            },
        );
        assert!(matches!(err, Err(Error::EmptyValue { .. })));
    }

    #[test]
    fn oscillator_has_no_left_limit_at_its_end() {
        let t = std::f64::consts::PI;
        let m = SetValuedMapping::new(
            1,
            t,
            vec![Piece {
                start: 0.0,
                family: Family::Oscillator,
            }],
            vec![Override {
                time: t,
                set: ConvexSet::point(vec![2.0]),
            }],
        )
        .unwrap();
        assert_eq!(m.evaluate(t).unwrap(), ConvexSet::point(vec![2.0]));
        assert!(m.left_limit(t).unwrap().is_none());
        let s = 1.0;
        assert_eq!(
            m.evaluate(s).unwrap(),
            ConvexSet::point(vec![(1.0 / (t - s)).sin()])
        );
    }

    #[test]
    fn fattened_membership_is_strict() {
        let m = SetValuedMapping::constant(ConvexSet::interval(0.0, 1.0).unwrap(), 1.0).unwrap();
        assert!(fattened_membership(&m, 0.3, &[1.5], 0.6).unwrap());
        assert!(!fattened_membership(&m, 0.3, &[1.5], 0.5).unwrap());
        let b =
            SetValuedMapping::constant(ConvexSet::ball(vec![0.0, 0.0], 1.0).unwrap(), 1.0).unwrap();
        assert!(fattened_membership(&b, 0.3, &[2.0, 0.0], 1.01).unwrap());
    }
}
