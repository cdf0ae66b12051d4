use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::mapping::SetMap;
use crate::path::{CadlagPath, Flag};

/// `y(t) = project(Γ_t, x)` at every node. At marked nodes the stored left
/// limit is `project(v⃗Γ_t, x)`; elsewhere the path is continuous.
pub fn projection_selection<M: SetMap + ?Sized>(
    map: &M,
    x: &[f64],
    grid: &TimeGrid,
) -> Result<CadlagPath> {
    if x.len() != map.dim() {
        return Err(Error::Dimension {
            expected: map.dim(),
            found: x.len(),
        });
    }
    let mut right = Vec::with_capacity(grid.len());
    let mut left = Vec::with_capacity(grid.len());
    for (k, &t) in grid.nodes.iter().enumerate() {
        let r = map.region(t)?.project(x)?;
        let l = if k > 0 && grid.is_marked(k) {
            match map.left_region(t)? {
                Some(region) => region.project(x)?,
                None => return Err(Error::empty_value(t, "the left limit is empty")),
            }
        } else {
            r.clone()
        };
        right.push(r);
        left.push(l);
    }
    Ok(CadlagPath::on_grid(grid, right, left, Flag::Interior))
}
