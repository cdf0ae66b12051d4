//! Càdlàg paths stored on a grid: right values at every knot, left limits at
//! every knot, affine in between.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::linalg::{dist, lerp, zeros, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Interior,
    BreakpointRight,
    BreakpointLeft,
    Projected,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Interior => "interior",
            Flag::BreakpointRight => "breakpoint_right",
            Flag::BreakpointLeft => "breakpoint_left",
            Flag::Projected => "projected",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "interior" => Flag::Interior,
            "breakpoint_right" => Flag::BreakpointRight,
            "breakpoint_left" => Flag::BreakpointLeft,
            "projected" => Flag::Projected,
            _ => return None,
        })
    }
}

/// On `[t_{k-1}, t_k)` the path runs affinely from `right[k-1]` to
/// `left[k]`; `left[0]` is the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct CadlagPath {
    pub dim: usize,
    pub knots: Vec<f64>,
    pub right: Vec<Point>,
    pub left: Vec<Point>,
    pub pieces: Vec<usize>,
    pub flags: Vec<Flag>,
}

impl CadlagPath {
    /// Path on the nodes of `grid`. Knots are numbered into pieces by the
    /// grid's marked nodes; marked knots get `breakpoint_right`, the others
    /// `default`.
    pub fn on_grid(
        grid: &TimeGrid,
        right: Vec<Point>,
        mut left: Vec<Point>,
        default: Flag,
    ) -> Self {
        let dim = right.first().map_or(0, Vec::len);
        left[0] = zeros(dim);
        let mut pieces = Vec::with_capacity(grid.len());
        let mut flags = Vec::with_capacity(grid.len());
        let mut piece = 0;
        for k in 0..grid.len() {
            let marked = k > 0 && grid.is_marked(k);
            if marked {
                piece += 1;
            }
            pieces.push(piece);
            flags.push(if marked {
                Flag::BreakpointRight
            } else {
                default
            });
        }
        CadlagPath {
            dim,
            knots: grid.nodes.clone(),
            right,
            left,
            pieces,
            flags,
        }
    }

    /// Continuous path through `values` (left limits equal right values
    /// except at 0).
    pub fn continuous(grid: &TimeGrid, values: Vec<Point>, default: Flag) -> Self {
        let left = values.clone();
        Self::on_grid(grid, values, left, default)
    }

    pub fn horizon(&self) -> f64 {
        *self.knots.last().expect("nonempty path")
    }

    pub fn value(&self, t: f64) -> Point {
        let n = self.knots.len();
        let k = self.knots.partition_point(|&s| s <= t);
        if k == 0 {
            return self.right[0].clone();
        }
        if k >= n {
            return self.right[n - 1].clone();
        }
        let (a, b) = (self.knots[k - 1], self.knots[k]);
        lerp(&self.right[k - 1], &self.left[k], (t - a) / (b - a))
    }

    /// `y(t-)`, with `y(0-) = 0`.
    pub fn left_limit(&self, t: f64) -> Point {
        if t <= 0.0 {
            return zeros(self.dim);
        }
        let k = self.knots.partition_point(|&s| s < t);
        let k = k.min(self.knots.len() - 1);
        if self.knots[k] == t {
            return self.left[k].clone();
        }
        let (a, b) = (self.knots[k - 1], self.knots[k]);
        lerp(&self.right[k - 1], &self.left[k], (t - a) / (b - a))
    }

    /// Knots in `(0, T]` where `|y(t) - y(t-)| > tol`.
    pub fn jumps(&self, tol: f64) -> Vec<f64> {
        (1..self.knots.len())
            .filter(|&k| dist(&self.right[k], &self.left[k]) > tol)
            .map(|k| self.knots[k])
            .collect()
    }

    /// `max_k |y(t_k) - z(t_k)|` over shared knots.
    pub fn sup_distance(&self, other: &CadlagPath) -> f64 {
        self.right
            .iter()
            .zip(&other.right)
            .map(|(a, b)| dist(a, b))
            .fold(0.0, f64::max)
    }

    /// CSV with header `t,x1,..,xd,piece,flag`. A knot with a jump first
    /// emits its left limit flagged `breakpoint_left`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in 1..=self.dim {
            let _ = write!(out, ",x{i}");
        }
        out.push_str(",piece,flag\n");
        let mut row = |t: f64, x: &[f64], piece: usize, flag: Flag| {
            let _ = write!(out, "{t:.16e}");
            for v in x {
                let _ = write!(out, ",{v:.16e}");
            }
            let _ = writeln!(out, ",{piece},{}", flag.as_str());
        };
        for k in 0..self.knots.len() {
            if k > 0 && self.left[k] != self.right[k] {
                let piece = self.pieces[k - 1];
                row(self.knots[k], &self.left[k], piece, Flag::BreakpointLeft);
            }
            row(self.knots[k], &self.right[k], self.pieces[k], self.flags[k]);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_error(1, "missing header"))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 4 || cols[0] != "t" || cols[cols.len() - 2..] != ["piece", "flag"] {
            return Err(parse_error(1, "header must be t,x1,..,xd,piece,flag"));
        }
        let dim = cols.len() - 3;
        let mut path = CadlagPath {
            dim,
            knots: Vec::new(),
            right: Vec::new(),
            left: Vec::new(),
            pieces: Vec::new(),
            flags: Vec::new(),
        };
        let mut pending_left: Option<Point> = None;
        for (i, line) in lines {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != cols.len() {
                return Err(parse_error(i + 1, "wrong number of fields"));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| parse_error(i + 1, &e.to_string()))
            };
            let t = num(fields[0])?;
            let x = fields[1..=dim]
                .iter()
                .map(|s| num(s))
                .collect::<Result<Point>>()?;
            let piece = fields[dim + 1]
                .parse::<usize>()
                .map_err(|e| parse_error(i + 1, &e.to_string()))?;
            let flag =
                Flag::parse(fields[dim + 2]).ok_or_else(|| parse_error(i + 1, "unknown flag"))?;
            if flag == Flag::BreakpointLeft {
                pending_left = Some(x);
                continue;
            }
            let left = match pending_left.take() {
                Some(l) => l,
                None if path.knots.is_empty() => zeros(dim),
                None => x.clone(),
            };
            path.knots.push(t);
            path.right.push(x);
            path.left.push(left);
            path.pieces.push(piece);
            path.flags.push(flag);
        }
        if path.knots.is_empty() {
            return Err(parse_error(2, "no rows"));
        }
        Ok(path)
    }
}

fn parse_error(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        column: 1,
        message: message.to_string(),
    }
}
