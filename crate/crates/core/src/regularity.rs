//! Executable checks of the càdlàg representation criteria: right inner
//! semicontinuity, nonempty left limits, the left-window condition on
//! bounded open sets, and the left/right discontinuity sets D1, D2.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convex::TOL_GEOM;
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::linalg::{dist, Point};
use crate::mapping::SetMap;
use crate::probe::{ProbeCatalog, ProbeRegion};
use crate::region::region_contains;

/// Exponents `j` of the right ladder `h = T 10^-j`.
pub const ISC_LADDER: std::ops::RangeInclusive<i32> = 2..=12;
/// Number of halvings in the left window `δ_j = δ_0 2^-j`.
pub const WINDOW_LEVELS: usize = 12;
/// Relative positions inside each left window level.
pub const WINDOW_SAMPLES: [f64; 5] = [1.0, 0.8, 0.6, 0.4, 0.2];

#[derive(Debug, Clone, Serialize)]
pub struct CheckConfig {
    pub tol_geom: f64,
    /// Largest distance allowed at the finest rung of the right ladder.
    pub tol_isc: f64,
    /// Random projection samples per time, on top of extreme points.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            tol_geom: TOL_GEOM,
            tol_isc: 1e-6,
            samples: 8,
            seed: 0,
        }
    }
}

/// Per-key seed so that sampling does not depend on evaluation order.
pub fn keyed_rng(seed: u64, key: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ key.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IscWitness {
    pub t: f64,
    pub y: Point,
    /// Finest step `h` with `distance(Γ_{t+h}, y)` at that step.
    pub h: f64,
    pub distance: f64,
    /// `(h, distance)` along the whole ladder.
    pub ladder: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IscVerdict {
    pub pass: bool,
    pub times: usize,
    pub probes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<IscWitness>,
}

fn ladder(horizon: f64, t: f64) -> Vec<f64> {
    ISC_LADDER
        .map(|j| horizon * 10f64.powi(-j))
        .filter(|h| t + h <= horizon)
        .collect()
}

/// `distance(Γ_{t+h}, y)` along the right ladder at `t`.
pub fn isc_ladder<M: SetMap + ?Sized>(m: &M, t: f64, y: &[f64]) -> Result<Vec<(f64, f64)>> {
    ladder(m.horizon(), t)
        .into_iter()
        .map(|h| Ok((h, m.region(t + h)?.distance(y)?)))
        .collect()
}

/// Right inner semicontinuity at every grid time `t < T`: each probe point
/// `y ∈ Γ_t` must be approached by `Γ_{t+h}` as `h ↓ 0` along the ladder.
pub fn check_right_isc<M: SetMap + ?Sized>(
    m: &M,
    grid: &TimeGrid,
    cfg: &CheckConfig,
) -> Result<IscVerdict> {
    let horizon = m.horizon();
    let last = grid.len() - 1;
    let per_node: Vec<Result<(usize, Option<IscWitness>)>> = (0..last)
        .into_par_iter()
        .map(|k| {
            let t = grid.nodes[k];
            let region = m.region(t)?;
            let mut probes = region.boundary_samples()?;
            let mut rng = keyed_rng(cfg.seed, k as u64);
            probes.extend(region.projection_samples(&mut rng, cfg.samples)?);
            let finest = *ladder(horizon, t).last().expect("t < T");
            for y in &probes {
                let d = m.region(t + finest)?.distance(y)?;
                if !(d <= cfg.tol_isc) {
                    return Ok((
                        probes.len(),
                        Some(IscWitness {
                            t,
                            y: y.clone(),
                            h: finest,
                            distance: d,
                            ladder: isc_ladder(m, t, y)?,
                        }),
                    ));
                }
            }
            Ok((probes.len(), None))
        })
        .collect();
    let mut probes = 0;
    let mut witness = None;
    for r in per_node {
        let (n, w) = r?;
        probes += n;
        if witness.is_none() {
            witness = w;
        }
    }
    Ok(IscVerdict {
        pass: witness.is_none(),
        times: last,
        probes,
        witness,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DomainVerdict {
    pub pass: bool,
    /// First time with an empty left limit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<f64>,
}

/// The left-limit mapping is nonempty at every breakpoint and grid time.
/// Inside a piece it equals the value, so this is exact on stored mappings.
pub fn check_vec_full_domain<M: SetMap + ?Sized>(m: &M, grid: &TimeGrid) -> Result<DomainVerdict> {
    let mut times: Vec<f64> = m.breakpoints();
    times.extend(grid.nodes.iter().copied().filter(|&t| t > 0.0));
    times.sort_by(f64::total_cmp);
    times.dedup();
    for t in times {
        if m.left_region(t)?.is_none() {
            return Ok(DomainVerdict {
                pass: false,
                witness: Some(t),
            });
        }
    }
    Ok(DomainVerdict {
        pass: true,
        witness: None,
    })
}

/// Outcome of following `project(Γ_s, c)` as `s ↑ t` inside `O = B(c, r)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Cluster {
    /// Some sampled `Γ_s` misses `O`.
    Outside,
    /// The candidates settle; the finest one is returned.
    Converged(Point),
    /// The candidates keep moving; `spread` at the finest level.
    Diverged { spread: f64 },
}

/// Half the shortest gap between consecutive breakpoints (0 included).
pub fn window_start<M: SetMap + ?Sized>(m: &M) -> f64 {
    let mut prev = 0.0;
    let mut shortest = f64::INFINITY;
    for t in m.breakpoints() {
        if t > prev {
            shortest = shortest.min(t - prev);
            prev = t;
        }
    }
    0.5 * shortest
}

/// Left-window clustering at `t`: candidates `project(Γ_s, c)` at
/// `s = t - δ_j u`. They converge when the spread at the finest level is at
/// most `10 tol_geom` plus the larger of an eighth of the largest spread
/// seen and the drift the parameter speed allows across the finest window,
/// and the finest candidate stays in `O` and near every finest-level `Γ_s`.
pub fn left_cluster<M: SetMap + ?Sized>(
    m: &M,
    t: f64,
    center: &[f64],
    radius: f64,
    delta0: f64,
    tol_geom: f64,
) -> Result<Cluster> {
    let regions = window_regions(m, t, delta0)?;
    cluster_in(&regions, center, radius, tol_geom, window_drift(m, delta0))
}

/// Movement of `Γ_s` over the finest window allowed by the parameter speed:
/// box bounds move by `L` per coordinate, a ball's center and radius by
/// `(sqrt(d) + 1) L` together. Zero when the speed is unbounded.
fn window_drift<M: SetMap + ?Sized>(m: &M, delta0: f64) -> f64 {
    let width = delta0 * 0.5f64.powi(WINDOW_LEVELS as i32) * (WINDOW_SAMPLES[0] - WINDOW_SAMPLES[4]);
    let drift = ((m.dim() as f64).sqrt() + 1.0) * m.lipschitz() * width;
    if drift.is_finite() {
        drift
    } else {
        0.0
    }
}

fn window_regions<M: SetMap + ?Sized>(
    m: &M,
    t: f64,
    delta0: f64,
) -> Result<Vec<Vec<crate::region::Region>>> {
    (0..=WINDOW_LEVELS)
        .map(|j| {
            let delta = delta0 * 0.5f64.powi(j as i32);
            WINDOW_SAMPLES
                .iter()
                .map(|u| m.region(t - delta * u))
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

fn cluster_in(
    regions: &[Vec<crate::region::Region>],
    center: &[f64],
    radius: f64,
    tol_geom: f64,
    drift: f64,
) -> Result<Cluster> {
    let mut levels: Vec<Vec<Point>> = Vec::with_capacity(regions.len());
    for level in regions {
        let mut cands = Vec::with_capacity(level.len());
        for r in level {
            let p = r.project(center)?;
            if !(dist(&p, center) < radius) {
                return Ok(Cluster::Outside);
            }
            cands.push(p);
        }
        levels.push(cands);
    }
    let spread = |c: &[Point]| {
        let mut s = 0.0f64;
        for i in 0..c.len() {
            for j in (i + 1)..c.len() {
                s = s.max(dist(&c[i], &c[j]));
            }
        }
        s
    };
    let spreads: Vec<f64> = levels.iter().map(|c| spread(c)).collect();
    let largest = spreads.iter().copied().fold(0.0, f64::max);
    let fine = *spreads.last().expect("levels");
    let slack = 10.0 * tol_geom + (largest / 8.0).max(drift);
    if fine > slack {
        return Ok(Cluster::Diverged { spread: fine });
    }
    let finest = levels.last().expect("levels");
    let y = finest.last().expect("samples").clone();
    if !(dist(&y, center) < radius) {
        return Ok(Cluster::Diverged { spread: fine });
    }
    for r in regions.last().expect("levels") {
        if r.distance(&y)? > fine.max(drift) + 10.0 * tol_geom {
            return Ok(Cluster::Diverged { spread: fine });
        }
    }
    Ok(Cluster::Converged(y))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assumption1Failure {
    pub t: f64,
    pub probe_index: usize,
    pub probe: ProbeRegion,
    pub spread: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Assumption1Verdict {
    pub pass: bool,
    /// Always "catalog": only the balls of the catalog are tested.
    pub scope: String,
    pub probes: usize,
    pub breakpoints: usize,
    /// Probe/breakpoint pairs whose left-window hypothesis held.
    pub tested: usize,
    pub failures: Vec<Assumption1Failure>,
    pub warnings: Vec<String>,
}

/// For each breakpoint `t` and catalog ball `O`: if `Γ_s` meets `O` on the
/// sampled left window, the clustered candidate must converge.
pub fn check_assumption1<M: SetMap + ?Sized>(
    m: &M,
    catalog: &ProbeCatalog,
    cfg: &CheckConfig,
) -> Result<Assumption1Verdict> {
    let (lo, hi) = m.bounding_box();
    let probes = catalog.build(&lo, &hi);
    let delta0 = window_start(m);
    let breakpoints = m.breakpoints();
    let mut tested = 0;
    let mut failures = Vec::new();
    let mut warnings = Vec::new();
    let drift = window_drift(m, delta0);
    for &t in &breakpoints {
        let regions = window_regions(m, t, delta0)?;
        let outcomes: Vec<Result<Cluster>> = probes
            .par_iter()
            .map(|p| cluster_in(&regions, &p.center, p.radius, cfg.tol_geom, drift))
            .collect();
        let mut hit = false;
        for (i, o) in outcomes.into_iter().enumerate() {
            match o? {
                Cluster::Outside => {}
                Cluster::Converged(_) => {
                    hit = true;
                    tested += 1;
                }
                Cluster::Diverged { spread } => {
                    hit = true;
                    tested += 1;
                    failures.push(Assumption1Failure {
                        t,
                        probe_index: i,
                        probe: probes[i].clone(),
                        spread,
                    });
                }
            }
        }
        if !hit {
            warnings.push(format!(
                "ProbeCatalogTooCoarse: no probe meets the left window at t = {t}"
            ));
        }
    }
    Ok(Assumption1Verdict {
        pass: failures.is_empty(),
        scope: "catalog".into(),
        probes: probes.len(),
        breakpoints: breakpoints.len(),
        tested,
        failures,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discontinuities {
    /// Breakpoints where `Γ_t ⊄ v⃗Γ_t`.
    pub d1: Vec<f64>,
    /// Breakpoints where `v⃗Γ_t ⊄ Γ_t`.
    pub d2: Vec<f64>,
    /// One reason per entry of `d1`.
    pub d1_reasons: Vec<String>,
}

pub fn detect_discontinuity_sets<M: SetMap + ?Sized>(
    m: &M,
    tol_geom: f64,
) -> Result<Discontinuities> {
    let mut out = Discontinuities {
        d1: Vec::new(),
        d2: Vec::new(),
        d1_reasons: Vec::new(),
    };
    for t in m.breakpoints() {
        let value = m.region(t)?;
        let Some(left) = m.left_region(t)? else {
            out.d1.push(t);
            out.d1_reasons.push("empty left limit".into());
            continue;
        };
        if let Some(w) = region_contains(&value, &left, tol_geom)? {
            out.d1.push(t);
            out.d1_reasons
                .push(format!("value point {w:?} is not in the left limit"));
        }
        if region_contains(&left, &value, tol_geom)?.is_some() {
            out.d2.push(t);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub horizon: f64,
    pub cells: usize,
    pub nodes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub isc: IscVerdict,
    pub vec_domain: DomainVerdict,
    pub assumption1: Assumption1Verdict,
    pub discontinuities: Discontinuities,
    pub grid: GridInfo,
    pub catalog: ProbeCatalog,
    pub config: CheckConfig,
}

impl RegularityReport {
    pub fn all_pass(&self) -> bool {
        self.isc.pass && self.vec_domain.pass && self.assumption1.pass
    }

    pub fn d1(&self) -> &[f64] {
        &self.discontinuities.d1
    }

    /// Earliest time named by a failing verdict.
    pub fn first_failure(&self) -> Option<f64> {
        [
            self.isc.witness.as_ref().map(|w| w.t),
            self.vec_domain.witness,
            self.assumption1.failures.first().map(|f| f.t),
        ]
        .into_iter()
        .flatten()
        .reduce(f64::min)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Io(e.to_string()))
    }
}

pub fn regularity_report<M: SetMap + ?Sized>(
    m: &M,
    grid: &TimeGrid,
    catalog: &ProbeCatalog,
    cfg: &CheckConfig,
) -> Result<RegularityReport> {
    Ok(RegularityReport {
        isc: check_right_isc(m, grid, cfg)?,
        vec_domain: check_vec_full_domain(m, grid)?,
        assumption1: check_assumption1(m, catalog, cfg)?,
        discontinuities: detect_discontinuity_sets(m, cfg.tol_geom)?,
        grid: GridInfo {
            horizon: grid.horizon,
            cells: grid.cells,
            nodes: grid.len(),
        },
        catalog: catalog.clone(),
        config: cfg.clone(),
    })
}

/// Grid of `cells` uniform cells refined by the mapping's breakpoints.
pub fn grid_for<M: SetMap + ?Sized>(m: &M, cells: usize) -> TimeGrid {
    TimeGrid::new(m.horizon(), cells, &m.breakpoints())
}
