//! Merged two-step stepper: while the prism sweep computes time step `t` at
//! each cell, it computes step `t+1` one diagonal behind, at
//! `(x−1, y−1, z−1)` — the cell whose forward neighborhood the traversal has
//! just completed. Cells in the last row or column of a layer are lagged
//! targets no sweep diagonal reaches, so the boundary-neighbor handler
//! finishes them as the sweep passes; the top layer runs its second step
//! after the sweep.

use crate::error::Result;
use crate::kernels::{
    adaptive_collide_stream, boundary_cell_comp, boundary_neighbor_handler, KernelParams,
};
use crate::lattice::DistributionField;
use crate::solvers::require_min_dims;
use crate::traversal::PrismCursor;

/// Advances the field by TWO time steps in one prism sweep. Mid-cycle states
/// never exist, so only whole cycles are offered.
pub fn two_step_prism_cycle(
    field: &mut DistributionField,
    params: &KernelParams,
    tile: usize,
) -> Result<()> {
    let spec = field.spec();
    require_min_dims(spec, 3)?;
    let cursor = PrismCursor::full(spec, tile)?;
    let view = field.view_mut();

    cursor.try_for_each(|x, y, z| {
        // First computation, time step t.
        adaptive_collide_stream(&view, x, y, z, params)?;
        // Second computation, time step t+1, one diagonal behind.
        if x > 1 && y > 1 && z > 1 {
            adaptive_collide_stream(&view, x - 1, y - 1, z - 1, params)?;
        }
        // Second computation of lagged row/column neighbors.
        boundary_neighbor_handler(&view, x, y, z, params)
    })?;

    // Second computation of the top layer.
    for y in 1..=spec.ly {
        for z in 1..=spec.lz {
            boundary_cell_comp(&view, spec.lx, y, z, params)?;
        }
    }
    Ok(())
}
