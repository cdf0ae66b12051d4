use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::linalg::{dist, Point};
use crate::mapping::SetMap;
use crate::path::{CadlagPath, Flag};
use crate::region::Region;
use crate::regularity::RegularityReport;

use super::cover::{self, Stage};
use super::epsilon::fattened_cover;
use super::jump_nodes;
use super::schedule::RefinementSchedule;

#[derive(Debug, Clone)]
pub struct MichaelRun {
    /// `project(Γ_t, y_{k*}(t))` at every node.
    pub path: CadlagPath,
    /// `y_0, ..., y_{k*}`.
    pub iterates: Vec<CadlagPath>,
    pub schedule: RefinementSchedule,
}

/// One refinement round: anchors for `Φ_t = Γ_t ∩ B̄(y_k(t), ε_k)` valid
/// within `ε_{k+1}`.
struct Round<'a, M: SetMap + ?Sized> {
    map: &'a M,
    grid: &'a TimeGrid,
    regions: &'a [Region],
    prev: &'a CadlagPath,
    eps: f64,
    next: f64,
}

impl<M: SetMap + ?Sized> Round<'_, M> {
    fn working(&self, k: usize) -> Region {
        self.regions[k]
            .clone()
            .with_ball(self.prev.right[k].clone(), self.eps)
    }
}

impl<M: SetMap + ?Sized> Stage for Round<'_, M> {
    fn valid(&self, p: &[f64], k: usize) -> Result<bool> {
        if dist(p, &self.prev.right[k]) <= self.eps && self.regions[k].contains(p, 0.0)? {
            return Ok(true);
        }
        Ok(self.working(k).distance(p)? < self.next)
    }

    fn anchor(&self, k: usize, prev: &[f64]) -> Result<Point> {
        self.working(k).project(prev)
    }

    fn left_anchor(&self, k: usize, prev: &[f64]) -> Result<Point> {
        let t = self.grid.nodes[k];
        let center = &self.prev.left[k];
        match self.map.left_region(t)? {
            Some(r) => r.with_ball(center.clone(), self.eps).project(prev),
            None => Err(Error::infeasible(t, "the left limit is empty")),
        }
    }
}

/// Iterative selection of `cl Γ`, refusing mappings whose report has a
/// failing verdict.
pub fn michael_selection<M: SetMap + ?Sized>(
    map: &M,
    tol_sel: f64,
    report: &RegularityReport,
    grid: &TimeGrid,
) -> Result<MichaelRun> {
    if !report.all_pass() {
        return Err(Error::infeasible(
            report.first_failure().unwrap_or(0.0),
            "the regularity report has a failing verdict",
        ));
    }
    michael_iterates(map, tol_sel, report.d1(), grid)
}

/// The iteration itself: `y_0` is an `ε_0`-selection, `y_{k+1}` an
/// `ε_{k+1}`-selection of `Γ ∩ (y_k + ε_k B̄)`, and the output projects
/// `y_{k*}` onto `Γ_t` (left limits onto `v⃗Γ_t`).
pub fn michael_iterates<M: SetMap + ?Sized>(
    map: &M,
    tol_sel: f64,
    d1: &[f64],
    grid: &TimeGrid,
) -> Result<MichaelRun> {
    let schedule = RefinementSchedule::new(tol_sel);
    let regions = grid
        .nodes
        .iter()
        .map(|&t| map.region(t))
        .collect::<Result<Vec<_>>>()?;
    let jumps = jump_nodes(grid, d1)?;
    let (right, left) = fattened_cover(map, grid, &regions, schedule.eps[0], &jumps)?;
    let mut iterates = vec![CadlagPath::on_grid(grid, right, left, Flag::Interior)];
    for k in 0..schedule.stop() {
        let round = Round {
            map,
            grid,
            regions: &regions,
            prev: iterates.last().expect("nonempty"),
            eps: schedule.eps[k],
            next: schedule.eps[k + 1],
        };
        let origin = round.prev.right[grid.len() - 1].clone();
        let (right, left) = cover::build(&round, grid, &jumps, &origin)?;
        iterates.push(CadlagPath::on_grid(grid, right, left, Flag::Interior));
    }
    let last = iterates.last().expect("nonempty");
    let mut right = Vec::with_capacity(grid.len());
    let mut left = Vec::with_capacity(grid.len());
    for (k, region) in regions.iter().enumerate() {
        let r = region.project(&last.right[k])?;
        let l = if jumps.binary_search(&k).is_ok() {
            match map.left_region(grid.nodes[k])? {
                Some(lr) => lr.project(&last.left[k])?,
                None => last.left[k].clone(),
            }
        } else {
            r.clone()
        };
        right.push(r);
        left.push(l);
    }
    Ok(MichaelRun {
        path: CadlagPath::on_grid(grid, right, left, Flag::Projected),
        iterates,
        schedule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::dist;
    use crate::probe::ProbeCatalog;
    use crate::regularity::{grid_for, regularity_report, CheckConfig};

    fn run(m: &crate::mapping::SetValuedMapping, d1: &[f64]) -> (TimeGrid, MichaelRun) {
        let grid = grid_for(m, 200);
        let r = michael_iterates(m, 1e-6, d1, &grid).unwrap();
        (grid, r)
    }

    fn assert_contracts(r: &MichaelRun) {
        for i in 1..r.iterates.len() {
            let gap = r.iterates[i].sup_distance(&r.iterates[i - 1]);
            assert!(gap <= 2.0 * r.schedule.eps[i - 1] + 1e-9, "round {i}: {gap}");
        }
    }

    #[test]
    fn constant_box_selection_is_inside() {
        let m = fixtures::constant_box();
        let (grid, r) = run(&m, &[]);
        assert_contracts(&r);
        for (k, &t) in grid.nodes.iter().enumerate() {
            assert!(m.evaluate(t).unwrap().distance(&r.path.right[k]).unwrap() <= 1e-9);
        }
        assert!(r.path.jumps(1e-9).is_empty());
    }

    #[test]
    fn step_jumps_once() {
        let m = fixtures::step();
        let (grid, r) = run(&m, &[0.5]);
        assert_contracts(&r);
        let j = grid.index_of(0.5).unwrap();
        assert!(r.path.left[j][0] <= 1.0 + 1e-9);
        assert!(r.path.right[j][0] >= 2.0 - 1e-9);
        assert_eq!(r.path.jumps(1e-9), vec![0.5]);
    }

    #[test]
    fn remark_2_5_ends_at_two() {
        let m = fixtures::remark_2_5();
        let grid = grid_for(&m, 200);
        let rep = regularity_report(&m, &grid, &ProbeCatalog::default(), &CheckConfig::default()).unwrap();
        assert_eq!(rep.d1(), &[1.0]);
        let r = michael_selection(&m, 1e-6, &rep, &grid).unwrap();
        let n = grid.len() - 1;
        assert!(dist(&r.path.right[n], &[2.0]) <= 1e-9);
        assert!(r.path.left[n][0].abs() <= 1e-6);
    }

    #[test]
    fn failing_report_is_refused() {
        let m = fixtures::left_continuous_step();
        let grid = grid_for(&m, 200);
        let rep = regularity_report(&m, &grid, &ProbeCatalog::default(), &CheckConfig::default()).unwrap();
        assert!(matches!(
            michael_selection(&m, 1e-6, &rep, &grid),
            Err(Error::SelectionInfeasible { .. })
        ));
    }
}
