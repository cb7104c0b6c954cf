//! Parallel table construction.

use chitbl_core::chitab::ChiTable;
use chitbl_core::tablegen::{assemble, build_node_set, node_jobs, TableGenError};

use crate::pool::par_map;

/// Build panels `l_min..=l_max` with `jobs` workers. `progress` is called
/// after each finished node with `(l, i, gamma)`; the table does not depend
/// on `jobs` or on completion order.
pub fn build_table<P>(l_min: u32, l_max: u32, jobs: usize, progress: P) -> Result<ChiTable, TableGenError>
where
    P: Fn(u32, usize, f64) + Sync,
{
    let list = node_jobs(l_min, l_max)?;
    let nodes = par_map(&list, jobs, |_, &(l, i, gamma)| {
        let r = build_node_set(gamma).map_err(|e| TableGenError::Node { l, i, gamma, source: Box::new(e) });
        if r.is_ok() {
            progress(l, i, gamma);
        }
        r
    })
    .map_err(|(_, e)| e)?;
    assemble(l_min, l_max, nodes)
}
