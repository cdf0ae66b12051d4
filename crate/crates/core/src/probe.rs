//! Finite catalogs of bounded open balls standing in for "every bounded open
//! set".

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dist, Point};

/// The open ball `{x : |x - center| < radius}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRegion {
    pub center: Point,
    pub radius: f64,
}

impl ProbeRegion {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::validation("probe region", "radius must be positive"));
        }
        Ok(ProbeRegion { center, radius })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        dist(&self.center, x) < self.radius
    }
}

/// Balls centered on a lattice of the given step over a bounding box
/// inflated by `inflate`, one per radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeCatalog {
    pub step: f64,
    pub inflate: f64,
    pub radii: Vec<f64>,
}

impl Default for ProbeCatalog {
    fn default() -> Self {
        ProbeCatalog {
            step: 0.25,
            inflate: 1.0,
            radii: vec![0.25, 0.5, 1.0, 2.0],
        }
    }
}

impl ProbeCatalog {
    /// Probes ordered by lattice point (lexicographic, first coordinate
    /// slowest) and then by radius.
    pub fn build(&self, lower: &[f64], upper: &[f64]) -> Vec<ProbeRegion> {
        let d = lower.len();
        let axes: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let lo = ((lower[i] - self.inflate) / self.step).floor() as i64;
                let hi = ((upper[i] + self.inflate) / self.step).ceil() as i64;
                (lo..=hi).map(|k| k as f64 * self.step).collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; d];
        loop {
            let center: Point = (0..d).map(|i| axes[i][idx[i]]).collect();
            for &r in &self.radii {
                out.push(ProbeRegion {
                    center: center.clone(),
                    radius: r,
                });
            }
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < axes[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }
}

/// `step=0.25,inflate=1,radii=0.25:0.5:1:2`; omitted keys keep defaults.
impl FromStr for ProbeCatalog {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cat = ProbeCatalog::default();
        let bad = |m: String| Error::validation("probe catalog", m);
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, found `{item}`")))?;
            let num = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| bad(format!("`{v}`: {e}")))
            };
            match key.trim() {
                "step" => cat.step = num(value)?,
                "inflate" => cat.inflate = num(value)?,
                "radii" => cat.radii = value.split(':').map(num).collect::<Result<_>>()?,
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        if !(cat.step > 0.0) || !(cat.inflate >= 0.0) || cat.radii.is_empty() {
            return Err(bad(
                "step must be positive, inflate nonnegative, radii nonempty".into(),
            ));
        }
        if cat.radii.iter().any(|r| !(*r > 0.0)) {
            return Err(bad("radii must be positive".into()));
        }
        Ok(cat)
    }
}
