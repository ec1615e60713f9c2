//! Fused three-stage steppers: the boundary is collided and reverted first,
//! the bulk is updated in one fused collide+swap pass, and the boundary
//! streams last. Pulling the boundary out of the sweep removes all boundary
//! checks from the bulk loop.

use crate::error::Result;
use crate::kernels::{boundary_swap_stream, collide_revert, swap_stream, KernelParams};
use crate::lattice::{DistributionField, FieldView};
use crate::solvers::require_min_dims;
use crate::traversal::PrismCursor;

fn prepare_boundary(view: &FieldView<'_>, params: &KernelParams) -> Result<()> {
    let mut result = Ok(());
    view.spec().for_each_boundary_cell(|x, y, z| {
        if result.is_ok() {
            result = collide_revert(view, x, y, z, params);
        }
    });
    result
}

fn stream_boundary(view: &FieldView<'_>) {
    view.spec()
        .for_each_boundary_cell(|x, y, z| boundary_swap_stream(view, x, y, z));
}

/// One time step of the fused swap stepper with the plain ascending bulk
/// order. Requires a box of at least 3 cells per axis.
pub fn fuse_swap_step(field: &mut DistributionField, params: &KernelParams) -> Result<()> {
    let spec = field.spec();
    require_min_dims(spec, 3)?;
    let view = field.view_mut();

    prepare_boundary(&view, params)?;
    for ix in 2..spec.lx {
        for iy in 2..spec.ly {
            for iz in 2..spec.lz {
                collide_revert(&view, ix, iy, iz, params)?;
                swap_stream(&view, ix, iy, iz);
            }
        }
    }
    stream_boundary(&view);
    Ok(())
}

/// One time step of the fused swap stepper with the bulk visited in prism
/// order. The update is order-independent given the swap discipline, so the
/// result is bit-identical to [`fuse_swap_step`].
pub fn fuse_swap_prism_step(
    field: &mut DistributionField,
    params: &KernelParams,
    tile: usize,
) -> Result<()> {
    let spec = field.spec();
    require_min_dims(spec, 3)?;
    let cursor = PrismCursor::new(spec, tile, 2, spec.lx - 1)?;
    let view = field.view_mut();

    prepare_boundary(&view, params)?;
    cursor.try_for_each(|x, y, z| -> Result<()> {
        // The cursor clamps Y and Z to the box; shrink to the bulk.
        if y == 1 || y == spec.ly || z == 1 || z == spec.lz {
            return Ok(());
        }
        collide_revert(&view, x, y, z, params)?;
        swap_stream(&view, x, y, z);
        Ok(())
    })?;
    stream_boundary(&view);
    Ok(())
}
