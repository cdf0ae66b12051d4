//! Time grids: a uniform partition of `[0, T]` refined by required times.

use serde::Serialize;

/// Default number of uniform cells.
pub const DEFAULT_CELLS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    pub horizon: f64,
    pub cells: usize,
    pub nodes: Vec<f64>,
    /// Indices of nodes that coincide with a required time.
    pub marked: Vec<usize>,
}

impl TimeGrid {
    /// `cells` uniform cells plus every time in `required` (clipped to
    /// `[0, T]`). A uniform node within `1e-12 T` of a required time is
    /// replaced by it.
    pub fn new(horizon: f64, cells: usize, required: &[f64]) -> Self {
        let snap = 1e-12 * horizon.max(1.0);
        let mut req: Vec<f64> = required
            .iter()
            .copied()
            .filter(|t| *t >= 0.0 && *t <= horizon)
            .collect();
        req.sort_by(f64::total_cmp);
        req.dedup_by(|a, b| (*a - *b).abs() <= snap);
        let mut nodes: Vec<(f64, bool)> = (0..=cells)
            .map(|k| {
                let t = if k == cells {
                    horizon
                } else {
                    horizon * k as f64 / cells as f64
                };
                (t, false)
            })
            .collect();
        nodes.extend(req.iter().map(|t| (*t, true)));
        nodes.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        let mut merged: Vec<(f64, bool)> = Vec::with_capacity(nodes.len());
        for (t, r) in nodes {
            match merged.last_mut() {
                Some(last) if (t - last.0).abs() <= snap => {
                    if r && !last.1 {
                        *last = (t, true);
                    }
                }
                _ => merged.push((t, r)),
            }
        }
        // keep the endpoints exact
        merged[0].0 = 0.0;
        merged.last_mut().expect("nonempty").0 = horizon;
        TimeGrid {
            horizon,
            cells,
            marked: (0..merged.len()).filter(|&i| merged[i].1).collect(),
            nodes: merged.into_iter().map(|(t, _)| t).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of the node equal to `t` up to snapping.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let snap = 1e-12 * self.horizon.max(1.0);
        let i = self.nodes.partition_point(|&s| s < t - snap);
        (i < self.nodes.len() && (self.nodes[i] - t).abs() <= snap).then_some(i)
    }

    pub fn is_marked(&self, i: usize) -> bool {
        self.marked.binary_search(&i).is_ok()
    }

    pub fn max_cell(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refines_by_required_times() {
        let g = TimeGrid::new(1.0, 4, &[0.3, 0.5, 1.0]);
        assert_eq!(g.nodes, vec![0.0, 0.25, 0.3, 0.5, 0.75, 1.0]);
        assert_eq!(g.marked, vec![2, 3, 5]);
        assert_eq!(g.index_of(0.3), Some(2));
        assert_eq!(g.index_of(0.31), None);
    }

    #[test]
    fn snaps_nearby_nodes() {
        let pi = std::f64::consts::PI;
        let g = TimeGrid::new(pi, 1000, &[pi]);
        assert_eq!(g.len(), 1001);
        assert_eq!(*g.nodes.last().unwrap(), pi);
        let g = TimeGrid::new(1.0, 10, &[0.7]);
        assert_eq!(g.len(), 11);
        assert_eq!(g.nodes[7], 0.7);
    }
}
