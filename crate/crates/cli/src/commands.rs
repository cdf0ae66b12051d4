use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cadselect::convex::ConvexSet;
use cadselect::grid::TimeGrid;
use cadselect::integral::{interchange_grid, verify_interchange};
use cadselect::linalg::{dist, Point};
use cadselect::mapping::{SetMap, SetValuedMapping};
use cadselect::path::CadlagPath;
use cadselect::regularity::{grid_for, regularity_report, CheckConfig, RegularityReport};
use cadselect::selection::{
    castaing_family, epsilon_selection, excess_bound, excess_profile, michael_selection, projection_selection,
    CastaingTargets,
};
use cadselect::specfile::{read_integrand, read_spec, IntegrandSpec, Spec};
use cadselect::Error;
use serde::Serialize;

use crate::{Cli, Command, Common, Method};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_INPUT: u8 = 4;

/// Largest lattice the oracle will enumerate per time.
const MAX_LATTICE: usize = 20_000_000;

pub struct Status {
    pub code: u8,
    pub summary: String,
}

/// Input problems map to 4, construction failures to 3.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::SelectionInfeasible { .. }
            | Error::EmptyValue { .. }
            | Error::EmptySet(_)
            | Error::LeftSideInfinite
            | Error::NonConvergence { .. },
        ) => EXIT_INFEASIBLE,
        _ => EXIT_INPUT,
    }
}

pub fn run(cli: &Cli) -> Result<Status> {
    let c = &cli.common;
    validate(c)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(c.threads.unwrap_or(0))
        .build()
        .context("building the thread pool")?;
    fs::create_dir_all(&c.out).with_context(|| format!("creating {}", c.out.display()))?;
    pool.install(|| match &cli.command {
        Command::Check { spec } => check(c, spec),
        Command::Select { spec, method, x, eps } => select(c, spec, *method, x.as_deref(), *eps),
        Command::Castaing { spec, levels, samples } => castaing(c, spec, *levels, *samples),
        Command::Interchange { spec, levels } => interchange(c, spec, *levels),
        Command::Oracle {
            spec,
            x,
            step,
            stride,
            family,
        } => oracle(c, spec, x, *step, *stride, family.as_deref()),
    })
}

fn validate(c: &Common) -> Result<()> {
    for (name, v) in [
        ("--tol-geom", c.tol_geom),
        ("--tol-sel", c.tol_sel),
        ("--tol-proj", c.tol_proj),
        ("--tol-int", c.tol_int),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Validation {
                context: name.into(),
                message: "tolerances must be positive".into(),
            }
            .into());
        }
    }
    if c.grid == 0 {
        return Err(Error::Validation {
            context: "--grid".into(),
            message: "need at least one cell".into(),
        }
        .into());
    }
    if c.threads == Some(0) {
        return Err(Error::Validation {
            context: "CADSELECT_THREADS".into(),
            message: "need at least one thread".into(),
        }
        .into());
    }
    Ok(())
}

fn load_mapping(path: &Path) -> Result<SetValuedMapping> {
    let spec = read_spec(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(match spec {
        Spec::Mapping(m) => m,
        Spec::Integrand(IntegrandSpec { integrand, .. }) => integrand.domain,
    })
}

fn config(c: &Common) -> CheckConfig {
    CheckConfig {
        tol_geom: c.tol_geom,
        seed: c.seed,
        ..CheckConfig::default()
    }
}

fn grid_and_report(c: &Common, m: &SetValuedMapping) -> Result<(TimeGrid, RegularityReport)> {
    let grid = grid_for(m, c.grid);
    let catalog = crate::probes::parse(c.probes.as_deref()).map_err(|e| Error::Validation {
        context: "--probes".into(),
        message: format!("{e:#}"),
    })?;
    let report = regularity_report(m, &grid, &catalog, &config(c))?;
    Ok((grid, report))
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf> {
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn check(c: &Common, spec: &Path) -> Result<Status> {
    let m = load_mapping(spec)?;
    let (_, report) = grid_and_report(c, &m)?;
    let path = write(c.out.join("report.toml"), &report.to_toml()?)?;
    let mut summary = format!(
        "isc {}, left-limit domain {}, assumption 1 {} ({})",
        verdict(report.isc.pass),
        verdict(report.vec_domain.pass),
        verdict(report.assumption1.pass),
        report.assumption1.scope
    );
    if let Some(t) = report.first_failure() {
        write!(summary, "; first witness t = {t}").unwrap();
    }
    write!(summary, "; report {}", path.display()).unwrap();
    Ok(Status {
        code: if report.all_pass() { EXIT_PASS } else { EXIT_CHECK_FAILED },
        summary,
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

/// Largest `distance(Γ_t, y(t))` over the nodes.
fn max_distance(m: &SetValuedMapping, path: &CadlagPath, grid: &TimeGrid) -> Result<f64> {
    let mut worst = 0.0f64;
    for (k, &t) in grid.nodes.iter().enumerate() {
        worst = worst.max(m.region(t)?.distance(&path.right[k])?);
    }
    Ok(worst)
}

fn select(c: &Common, spec: &Path, method: Method, x: Option<&[f64]>, eps: f64) -> Result<Status> {
    let m = load_mapping(spec)?;
    let (grid, report) = grid_and_report(c, &m)?;
    let (path, name, tol) = match method {
        Method::Michael => {
            let run = michael_selection(&m, c.tol_sel, &report, &grid)?;
            (run.path, "michael", c.tol_sel)
        }
        Method::Projection => {
            let Some(x) = x else {
                return Err(Error::Validation {
                    context: "--x".into(),
                    message: "the projection selection needs a reference point".into(),
                }
                .into());
            };
            (projection_selection(&m, x, &grid)?, "projection", c.tol_proj)
        }
        Method::Epsilon => (epsilon_selection(&m, eps, report.d1(), &grid)?, "epsilon", eps),
    };
    let worst = max_distance(&m, &path, &grid)?;
    let out = write(c.out.join(format!("selection_{name}.csv")), &path.to_csv())?;
    let pass = if method == Method::Epsilon { worst < tol } else { worst <= tol };
    Ok(Status {
        code: if pass { EXIT_PASS } else { EXIT_CHECK_FAILED },
        summary: format!(
            "{name} selection on {} nodes, max distance {worst:e} ({}); {}",
            grid.len(),
            verdict(pass),
            out.display()
        ),
    })
}

#[derive(Serialize)]
struct Manifest {
    levels: usize,
    grid_cells: usize,
    grid_nodes: usize,
    excess_bound: f64,
    max_excess: f64,
    pass: bool,
    members: Vec<ManifestMember>,
    skipped: Vec<cadselect::selection::Skipped>,
}

#[derive(Serialize)]
struct ManifestMember {
    file: String,
    target_index: usize,
    target: Point,
    level: usize,
    eps: f64,
    interval: (f64, f64),
    terminal_variant: bool,
}

fn castaing(c: &Common, spec: &Path, levels: usize, samples: usize) -> Result<Status> {
    if levels == 0 {
        return Err(Error::Validation {
            context: "--levels".into(),
            message: "need at least one level".into(),
        }
        .into());
    }
    let m = load_mapping(spec)?;
    let (grid, report) = grid_and_report(c, &m)?;
    let family = castaing_family(&m, &CastaingTargets::new(&m, levels), c.tol_sel, &report, &grid)?;
    let dir = c.out.join("castaing");
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let width = family.members.len().to_string().len().max(4);
    let mut members = Vec::with_capacity(family.members.len());
    for (i, member) in family.members.iter().enumerate() {
        let file = format!("member_{i:0width$}.csv");
        write(dir.join(&file), &member.path.to_csv())?;
        members.push(ManifestMember {
            file,
            target_index: member.target_index,
            target: member.target.clone(),
            level: member.level,
            eps: member.eps,
            interval: member.interval,
            terminal_variant: member.terminal_variant,
        });
    }
    let bound = excess_bound(&m, levels, &grid);
    let excess = excess_profile(&m, &family.paths(), &grid, samples, c.seed)?;
    let max_excess = excess.iter().copied().fold(0.0, f64::max);
    let manifest = Manifest {
        levels,
        grid_cells: grid.cells,
        grid_nodes: grid.len(),
        excess_bound: bound,
        max_excess,
        pass: max_excess <= bound,
        members,
        skipped: family.skipped,
    };
    let text = toml::to_string(&manifest).context("serializing the manifest")?;
    let path = write(dir.join("manifest.toml"), &text)?;
    Ok(Status {
        code: if manifest.pass { EXIT_PASS } else { EXIT_CHECK_FAILED },
        summary: format!(
            "{} members, {} skipped, max excess {max_excess:.6} <= {bound:.6} ({}); {}",
            manifest.members.len(),
            manifest.skipped.len(),
            verdict(manifest.pass),
            path.display()
        ),
    })
}

fn interchange(c: &Common, spec: &Path, levels: usize) -> Result<Status> {
    let s = read_integrand(spec).with_context(|| format!("reading {}", spec.display()))?;
    let m = &s.integrand.domain;
    let grid = interchange_grid(&s.integrand, &s.measure, c.grid);
    let catalog = crate::probes::parse(c.probes.as_deref()).map_err(|e| Error::Validation {
        context: "--probes".into(),
        message: format!("{e:#}"),
    })?;
    let report = regularity_report(m, &grid, &catalog, &config(c))?;
    let mut family = vec![michael_selection(m, c.tol_sel, &report, &grid)?.path];
    if levels > 0 {
        let castaing = castaing_family(m, &CastaingTargets::new(m, levels), c.tol_sel, &report, &grid)?;
        family.extend(castaing.members.into_iter().map(|member| member.path));
    }
    let refs: Vec<&CadlagPath> = family.iter().collect();
    let r = verify_interchange(&s.integrand, &s.measure, &refs, &grid, c.tol_int)?;
    let path = write(c.out.join("interchange.toml"), &r.to_toml()?)?;
    if let Some(profile) = &r.profile {
        write(c.out.join("inf_profile.csv"), &profile.to_csv())?;
    }
    Ok(Status {
        code: if r.pass { EXIT_PASS } else { EXIT_CHECK_FAILED },
        summary: format!(
            "lhs {:.9} rhs {:.9} gap {:.3e} over {} candidates ({}); {}",
            r.lhs,
            r.rhs,
            r.gap,
            r.candidates,
            verdict(r.pass),
            path.display()
        ),
    })
}

/// Membership from the defining inequalities only.
fn member(set: &ConvexSet, x: &[f64]) -> bool {
    let in_box = |lower: &[f64], upper: &[f64]| x.iter().zip(lower.iter().zip(upper)).all(|(v, (l, u))| l <= v && v <= u);
    match set {
        ConvexSet::Box { lower, upper } => in_box(lower, upper),
        ConvexSet::Ball { center, radius } => dist(center, x) <= *radius,
        ConvexSet::Polytope(p) => {
            in_box(&p.lower, &p.upper)
                && p.normals
                    .iter()
                    .zip(&p.offsets)
                    .all(|(a, b)| a.iter().zip(x).map(|(u, v)| u * v).sum::<f64>() <= *b)
        }
    }
}

fn data_box(set: &ConvexSet) -> (Point, Point) {
    match set {
        ConvexSet::Box { lower, upper } => (lower.clone(), upper.clone()),
        ConvexSet::Ball { center, radius } => (
            center.iter().map(|c| c - radius).collect(),
            center.iter().map(|c| c + radius).collect(),
        ),
        ConvexSet::Polytope(p) => (p.lower.clone(), p.upper.clone()),
    }
}

/// Lattice points of `set` with cell diameter `diameter`.
fn lattice(set: &ConvexSet, diameter: f64) -> Result<Vec<Point>> {
    let (lo, hi) = data_box(set);
    let d = lo.len();
    let h = diameter / (d as f64).sqrt();
    let counts: Vec<usize> = lo.iter().zip(&hi).map(|(l, u)| ((u - l) / h).ceil() as usize + 1).collect();
    let total = counts.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n)).unwrap_or(usize::MAX);
    if total > MAX_LATTICE {
        bail!(Error::Validation {
            context: "--step".into(),
            message: format!("the lattice would have {total} points"),
        });
    }
    let mut out = Vec::new();
    for flat in 0..total {
        let mut rem = flat;
        let g: Point = (0..d)
            .map(|i| {
                let k = rem % counts[i];
                rem /= counts[i];
                (lo[i] + k as f64 * h).min(hi[i])
            })
            .collect();
        if member(set, &g) {
            out.push(g);
        }
    }
    Ok(out)
}

fn oracle(c: &Common, spec: &Path, x: &[f64], step: f64, stride: usize, family: Option<&Path>) -> Result<Status> {
    let m = load_mapping(spec)?;
    if x.len() != m.dim {
        return Err(Error::Dimension {
            expected: m.dim,
            found: x.len(),
        }
        .into());
    }
    if !(step > 0.0) || stride == 0 {
        return Err(Error::Validation {
            context: "oracle".into(),
            message: "--step and --stride must be positive".into(),
        }
        .into());
    }
    let grid = grid_for(&m, c.grid);
    let members = match family {
        Some(dir) => read_family(dir)?,
        None => Vec::new(),
    };
    let mut csv = String::from("t,dense_distance,kernel_distance");
    if !members.is_empty() {
        csv.push_str(",dense_excess");
    }
    csv.push('\n');
    let mut worst = 0.0f64;
    for k in (0..grid.len()).step_by(stride) {
        let t = grid.nodes[k];
        let set = m.evaluate(t)?;
        let points = lattice(&set, step)?;
        let dense = points.iter().map(|g| dist(g, x)).fold(f64::INFINITY, f64::min);
        let kernel = set.distance(x)?;
        worst = worst.max((dense - kernel).abs());
        write!(csv, "{t:.16e},{dense:.16e},{kernel:.16e}").unwrap();
        if !members.is_empty() {
            let excess = points
                .iter()
                .map(|g| members.iter().map(|p| dist(&p.right[k], g)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max);
            write!(csv, ",{excess:.16e}").unwrap();
        }
        csv.push('\n');
    }
    let path = write(c.out.join("oracle.csv"), &csv)?;
    Ok(Status {
        code: EXIT_PASS,
        summary: format!("max |dense - kernel| {worst:e} at step {step}; {}", path.display()),
    })
}

/// Member CSVs of a `castaing` output directory, in file-name order.
fn read_family(dir: &Path) -> Result<Vec<CadlagPath>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "csv"));
    files.sort();
    files
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(CadlagPath::from_csv(&text)?)
        })
        .collect()
}
