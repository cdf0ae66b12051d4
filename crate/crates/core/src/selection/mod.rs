//! Selection constructions: ε-selections, projection selections, the
//! iterative refinement and Castaing families.

mod cover;

pub mod castaing;
pub mod epsilon;
pub mod michael;
pub mod projection;
pub mod schedule;

pub use castaing::{
    castaing_family, excess_bound, excess_profile, CastaingFamily, CastaingTargets, Member, Skipped,
};
pub use epsilon::epsilon_selection;
pub use michael::{michael_iterates, michael_selection, MichaelRun};
pub use projection::projection_selection;
pub use schedule::RefinementSchedule;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// Grid indices of the jump times, sorted; `t = 0` is dropped.
pub(crate) fn jump_nodes(grid: &TimeGrid, d1: &[f64]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(d1.len());
    for &t in d1 {
        let i = grid
            .index_of(t)
            .ok_or_else(|| Error::validation("grid", format!("no node at jump time {t}")))?;
        if i > 0 {
            out.push(i);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
