//! Càdlàg piecewise-affine scalar functions on `[0, T]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Affine on each `[t_i, t_{i+1})` from `right[i]` at `t_i` towards
/// `left[i]` as `t ↑ t_{i+1}`; equal to `terminal` at `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFunction {
    pub breakpoints: Vec<f64>,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
    pub terminal: f64,
}

impl CoefficientFunction {
    pub fn new(
        breakpoints: Vec<f64>,
        right: Vec<f64>,
        left: Vec<f64>,
        terminal: f64,
    ) -> Result<Self> {
        let f = CoefficientFunction {
            breakpoints,
            right,
            left,
            terminal,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn constant(value: f64, horizon: f64) -> Self {
        CoefficientFunction {
            breakpoints: vec![0.0, horizon],
            right: vec![value],
            left: vec![value],
            terminal: value,
        }
    }

    /// `t ↦ a + b t` on `[0, T]`.
    pub fn affine(a: f64, b: f64, horizon: f64) -> Self {
        CoefficientFunction {
            breakpoints: vec![0.0, horizon],
            right: vec![a],
            left: vec![a + b * horizon],
            terminal: a + b * horizon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ctx = "coefficient function";
        let n = self.breakpoints.len();
        if n < 2 {
            return Err(Error::validation(
                ctx,
                "at least two breakpoints are required",
            ));
        }
        if self.breakpoints[0] != 0.0 {
            return Err(Error::validation(ctx, "breakpoints must start at 0"));
        }
        if self.breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::validation(
                ctx,
                "breakpoints must be strictly increasing",
            ));
        }
        if self.right.len() != n - 1 {
            return Err(Error::validation(
                ctx,
                format!(
                    "expected {} right values, found {}",
                    n - 1,
                    self.right.len()
                ),
            ));
        }
        if self.left.len() != n - 1 {
            return Err(Error::validation(
                ctx,
                format!("expected {} left values, found {}", n - 1, self.left.len()),
            ));
        }
        let all = self.right.iter().chain(&self.left).chain([&self.terminal]);
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::validation(ctx, "values must be finite"));
        }
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        *self.breakpoints.last().expect("validated")
    }

    /// Interior breakpoints together with `T`.
    pub fn knots(&self) -> &[f64] {
        &self.breakpoints[1..]
    }

    fn piece_at(&self, t: f64) -> usize {
        let n = self.right.len();
        self.breakpoints[1..n].partition_point(|&b| b <= t)
    }

    fn piece_before(&self, t: f64) -> usize {
        let n = self.right.len();
        self.breakpoints[1..n].partition_point(|&b| b < t)
    }

    fn on_piece(&self, i: usize, t: f64) -> f64 {
        let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
        let s = (t - a) / (b - a);
        self.right[i] + s * (self.left[i] - self.right[i])
    }

    pub fn value(&self, t: f64) -> f64 {
        if t >= self.horizon() {
            return self.terminal;
        }
        self.on_piece(self.piece_at(t), t)
    }

    /// `lim_{s↑t}` of the function; at `t = 0` the right value.
    pub fn left_limit(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.value(0.0);
        }
        let i = self.piece_before(t);
        if t >= self.breakpoints[i + 1] {
            return self.left[i];
        }
        self.on_piece(i, t)
    }

    /// Largest slope over the pieces.
    pub fn lipschitz(&self) -> f64 {
        (0..self.right.len())
            .map(|i| {
                (self.left[i] - self.right[i]).abs()
                    / (self.breakpoints[i + 1] - self.breakpoints[i])
            })
            .fold(0.0, f64::max)
    }

    pub fn is_constant(&self) -> bool {
        let v = self.terminal;
        self.right.iter().chain(&self.left).all(|x| *x == v)
    }

    /// Minimum and maximum over `[0, T]` including left limits.
    pub fn range(&self) -> (f64, f64) {
        self.right
            .iter()
            .chain(&self.left)
            .chain([&self.terminal])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(*v), hi.max(*v))
            })
    }
}
