use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::linalg::{dist, Point};
use crate::mapping::{Restricted, SetMap};
use crate::path::CadlagPath;
use crate::region::Region;
use crate::regularity::{keyed_rng, RegularityReport};

use super::jump_nodes;
use super::michael::michael_iterates;

/// Lattice targets for the levels `ε_k = 2^-k`, `k = 1..=levels`.
///
/// The finest lattice has step `ε_K / √d` (covering radius `ε_K / 2`); a
/// point belongs to level `k` when it also lies on the coarser lattice of
/// step `ε_k / √d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CastaingTargets {
    pub levels: usize,
    pub lower: Point,
    pub upper: Point,
}

impl CastaingTargets {
    pub fn new<M: SetMap + ?Sized>(map: &M, levels: usize) -> Self {
        let (lower, upper) = map.bounding_box();
        CastaingTargets {
            levels,
            lower,
            upper,
        }
    }

    pub fn eps(k: usize) -> f64 {
        0.5f64.powi(k as i32)
    }

    /// Lattice points in lexicographic order, each with its levels.
    pub fn points(&self) -> Vec<(Point, Vec<usize>)> {
        let d = self.lower.len();
        let step = Self::eps(self.levels) / (d as f64).sqrt();
        let ranges: Vec<(i64, i64)> = (0..d)
            .map(|i| {
                (
                    (self.lower[i] / step).floor() as i64,
                    (self.upper[i] / step).ceil() as i64,
                )
            })
            .collect();
        let mut out = Vec::new();
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let levels: Vec<usize> = (1..=self.levels)
                .filter(|&k| {
                    let m = 1i64 << (self.levels - k);
                    idx.iter().all(|v| v.rem_euclid(m) == 0)
                })
                .collect();
            out.push((idx.iter().map(|&v| v as f64 * step).collect(), levels));
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] <= ranges[i].1 {
                    break;
                }
                idx[i] = ranges[i].0;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Member {
    pub target_index: usize,
    pub target: Point,
    pub level: usize,
    pub eps: f64,
    /// The cover interval `[a, b]`; `[T, T]` for terminal variants.
    pub interval: (f64, f64),
    pub terminal_variant: bool,
    pub path: CadlagPath,
}

#[derive(Debug, Clone, Serialize)]
pub struct Skipped {
    pub target: Point,
    pub level: usize,
    pub interval: (f64, f64),
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct CastaingFamily {
    pub members: Vec<Member>,
    pub skipped: Vec<Skipped>,
}

impl CastaingFamily {
    pub fn paths(&self) -> Vec<&CadlagPath> {
        self.members.iter().map(|m| &m.path).collect()
    }
}

/// Maximal runs of nodes with `distance(Γ_s, y) < ε`, with `a < b`; a run
/// ending at a jump node before `T` is cut back by one node.
pub fn cover_runs(
    regions: &[Region],
    jumps: &[usize],
    y: &[f64],
    eps: f64,
) -> Result<Vec<(usize, usize)>> {
    let n = regions.len();
    let mut runs = Vec::new();
    let mut k = 0;
    while k < n {
        if regions[k].distance(y)? < eps {
            let a = k;
            while k + 1 < n && regions[k + 1].distance(y)? < eps {
                k += 1;
            }
            let mut b = k;
            if b < n - 1 && jumps.binary_search(&b).is_ok() {
                b -= 1;
            }
            if a < b {
                runs.push((a, b));
            }
        }
        k += 1;
    }
    Ok(runs)
}

/// One selection per (target, level, cover interval): the iterative
/// selection of `Γ` restricted to `Γ ∩ B̄(y, ε)` on the interval. When
/// `T ∈ D1`, terminal variants replace the value at `T` by
/// `project(Γ_T, y)`. Members are ordered by target, level, interval.
pub fn castaing_family<M: SetMap>(
    map: &M,
    targets: &CastaingTargets,
    tol_sel: f64,
    report: &RegularityReport,
    grid: &TimeGrid,
) -> Result<CastaingFamily> {
    if !report.all_pass() {
        return Err(Error::infeasible(
            report.first_failure().unwrap_or(0.0),
            "the regularity report has a failing verdict",
        ));
    }
    let d1 = report.d1();
    let jumps = jump_nodes(grid, d1)?;
    let regions = grid
        .nodes
        .iter()
        .map(|&t| map.region(t))
        .collect::<Result<Vec<_>>>()?;
    let n = grid.len();
    let horizon = map.horizon();
    let terminal_jump = jumps.last() == Some(&(n - 1));
    let base = if terminal_jump {
        Some(michael_iterates(map, tol_sel, d1, grid)?.path)
    } else {
        None
    };
    let points = targets.points();
    let jobs: Vec<(usize, usize)> = points
        .iter()
        .enumerate()
        .flat_map(|(m, (_, levels))| levels.iter().map(move |&k| (m, k)))
        .collect();
    let results: Vec<Result<(Vec<Member>, Vec<Skipped>)>> = jobs
        .par_iter()
        .map(|&(m, k)| {
            let y = &points[m].0;
            let eps = CastaingTargets::eps(k);
            let mut members = Vec::new();
            let mut skipped = Vec::new();
            for (a, b) in cover_runs(&regions, &jumps, y, eps)? {
                let interval = (grid.nodes[a], grid.nodes[b]);
                let phi = Restricted {
                    inner: map,
                    center: y.clone(),
                    radius: eps,
                    a: interval.0,
                    b: interval.1,
                };
                match michael_iterates(&phi, tol_sel, d1, grid) {
                    Ok(run) => members.push(Member {
                        target_index: m,
                        target: y.clone(),
                        level: k,
                        eps,
                        interval,
                        terminal_variant: false,
                        path: run.path,
                    }),
                    Err(
                        e @ (Error::SelectionInfeasible { .. }
                        | Error::EmptySet(_)
                        | Error::EmptyValue { .. }),
                    ) => skipped.push(Skipped {
                        target: y.clone(),
                        level: k,
                        interval,
                        reason: e.to_string(),
                    }),
                    Err(e) => return Err(e),
                }
            }
            if let Some(base) = &base {
                let last = &regions[n - 1];
                if last.distance(y)? < eps {
                    let mut path = base.clone();
                    path.right[n - 1] = last.project(y)?;
                    members.push(Member {
                        target_index: m,
                        target: y.clone(),
                        level: k,
                        eps,
                        interval: (horizon, horizon),
                        terminal_variant: true,
                        path,
                    });
                }
            }
            Ok((members, skipped))
        })
        .collect();
    let mut family = CastaingFamily {
        members: Vec::new(),
        skipped: Vec::new(),
    };
    for r in results {
        let (m, s) = r?;
        family.members.extend(m);
        family.skipped.extend(s);
    }
    Ok(family)
}

/// `2 ε_K + L T / N`.
pub fn excess_bound<M: SetMap + ?Sized>(map: &M, levels: usize, grid: &TimeGrid) -> f64 {
    2.0 * CastaingTargets::eps(levels) + map.lipschitz() * map.horizon() / grid.cells as f64
}

/// Per node: the one-sided excess of `Γ_t` over the members' values,
/// measured over the extreme points of `Γ_t` and `samples` random
/// projection samples.
pub fn excess_profile<M: SetMap + ?Sized>(
    map: &M,
    paths: &[&CadlagPath],
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let region = map.region(grid.nodes[k])?;
            let mut probes = region.boundary_samples()?;
            probes.extend(region.projection_samples(&mut keyed_rng(seed, k as u64), samples)?);
            Ok(probes
                .iter()
                .map(|z| {
                    paths
                        .iter()
                        .map(|p| dist(&p.right[k], z))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max))
        })
        .collect()
}
