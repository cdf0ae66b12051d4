use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::linalg::{zeros, Point};
use crate::mapping::SetMap;
use crate::path::{CadlagPath, Flag};
use crate::region::Region;

use super::cover::{self, Stage};
use super::jump_nodes;

struct Fattened<'a, M: SetMap + ?Sized> {
    map: &'a M,
    grid: &'a TimeGrid,
    regions: &'a [Region],
    eps: f64,
}

impl<M: SetMap + ?Sized> Stage for Fattened<'_, M> {
    fn valid(&self, p: &[f64], k: usize) -> Result<bool> {
        Ok(self.regions[k].distance(p)? < self.eps)
    }

    fn anchor(&self, k: usize, prev: &[f64]) -> Result<Point> {
        self.regions[k].project(prev)
    }

    fn left_anchor(&self, k: usize, prev: &[f64]) -> Result<Point> {
        let t = self.grid.nodes[k];
        match self.map.left_region(t)? {
            Some(r) => r.project(prev),
            None => Err(Error::infeasible(t, "the left limit is empty")),
        }
    }
}

/// A càdlàg path with `distance(Γ_t, y(t)) < ε` at every grid time, jumping
/// only at the grid nodes listed in `d1`.
pub fn epsilon_selection<M: SetMap + ?Sized>(
    map: &M,
    eps: f64,
    d1: &[f64],
    grid: &TimeGrid,
) -> Result<CadlagPath> {
    if !(eps > 0.0) {
        return Err(Error::validation("epsilon selection", "ε must be positive"));
    }
    let regions = grid
        .nodes
        .iter()
        .map(|&t| map.region(t))
        .collect::<Result<Vec<_>>>()?;
    let jumps = jump_nodes(grid, d1)?;
    let (right, left) = fattened_cover(map, grid, &regions, eps, &jumps)?;
    Ok(CadlagPath::on_grid(grid, right, left, Flag::Interior))
}

/// Node values of an ε-selection over precomputed values `regions`.
pub(super) fn fattened_cover<M: SetMap + ?Sized>(
    map: &M,
    grid: &TimeGrid,
    regions: &[Region],
    eps: f64,
    jumps: &[usize],
) -> Result<(Vec<Point>, Vec<Point>)> {
    let stage = Fattened {
        map,
        grid,
        regions,
        eps,
    };
    cover::build(&stage, grid, jumps, &zeros(map.dim()))
}
