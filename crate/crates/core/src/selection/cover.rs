//! Anchor covers on a grid, blended by piecewise-affine hat functions.
//!
//! Segments between jump nodes are built backward in time, starting from
//! the value the path must approach at the segment's right end. An anchor is
//! held while it stays valid; the next anchor is centered where the current
//! one stops being valid (or later, if the new anchor is not valid up to the
//! current center) and the two are blended affinely in time. Validity is
//! convex in the anchor, so every blended node is valid.
//!
//! Going backward, a value that shrinks at a breakpoint only grows, so the
//! path never has to steer into a smaller set ahead of time.

use crate::error::Result;
use crate::grid::TimeGrid;
use crate::linalg::{lerp, Point};

pub(crate) trait Stage: Sync {
    /// Whether the constant value `p` is acceptable at node `k`.
    fn valid(&self, p: &[f64], k: usize) -> Result<bool>;
    /// An anchor at node `k`, as close to `prev` as the stage allows.
    fn anchor(&self, k: usize, prev: &[f64]) -> Result<Point>;
    /// The left anchor at a jump node `k`, as close to the right value
    /// `prev` as the stage allows.
    fn left_anchor(&self, k: usize, prev: &[f64]) -> Result<Point>;
}

/// Right values and left limits at every node. `jumps` are sorted node
/// indices in `1..n`; the anchor at the last node is built from `origin`.
pub(crate) fn build<S: Stage>(
    stage: &S,
    grid: &TimeGrid,
    jumps: &[usize],
    origin: &[f64],
) -> Result<(Vec<Point>, Vec<Point>)> {
    let n = grid.len();
    let is_jump = |k: usize| jumps.binary_search(&k).is_ok();
    let mut right: Vec<Point> = vec![Vec::new(); n];
    let mut left: Vec<Point> = vec![Vec::new(); n];
    let mut hi = n - 1;
    right[hi] = stage.anchor(hi, origin)?;
    left[hi] = if is_jump(hi) {
        stage.left_anchor(hi, &right[hi])?
    } else {
        right[hi].clone()
    };
    loop {
        let lo = jumps.iter().rev().copied().find(|&j| j < hi).unwrap_or(0);
        let end = left[hi].clone();
        segment(stage, &grid.nodes, lo, hi, end, &mut right, &mut left)?;
        if lo == 0 {
            left[0] = right[0].clone();
            return Ok((right, left));
        }
        left[lo] = stage.left_anchor(lo, &right[lo])?;
        hi = lo;
    }
}

/// Fills nodes `lo..hi` backward so that the path runs into `end` at `hi`.
fn segment<S: Stage>(
    stage: &S,
    t: &[f64],
    lo: usize,
    hi: usize,
    end: Point,
    right: &mut [Point],
    left: &mut [Point],
) -> Result<()> {
    let mut c = hi;
    let mut p = end;
    while c > lo {
        let mut e = c;
        while e > lo && stage.valid(&p, e - 1)? {
            e -= 1;
        }
        if e == lo {
            for k in lo..c {
                right[k] = p.clone();
                left[k] = p.clone();
            }
            return Ok(());
        }
        // Next center m in [e - 1, c), halving toward c - 1.
        let mut m = e - 1;
        let pm = loop {
            let pm = stage.anchor(m, &p)?;
            if m + 1 == c || all_valid(stage, &pm, m + 1, c)? {
                break pm;
            }
            m = c - (c - m).div_ceil(2);
        };
        blend(right, left, t, m, &pm, c, &p);
        right[m] = pm.clone();
        left[m] = pm.clone();
        c = m;
        p = pm;
    }
    Ok(())
}

fn all_valid<S: Stage>(stage: &S, p: &[f64], from: usize, to: usize) -> Result<bool> {
    for k in from..to {
        if !stage.valid(p, k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nodes strictly between `a` and `b` get `lerp(pa, pb)` in time.
fn blend(right: &mut [Point], left: &mut [Point], t: &[f64], a: usize, pa: &[f64], b: usize, pb: &[f64]) {
    for k in (a + 1)..b {
        let v = lerp(pa, pb, (t[k] - t[a]) / (t[b] - t[a]));
        right[k] = v.clone();
        left[k] = v;
    }
}
