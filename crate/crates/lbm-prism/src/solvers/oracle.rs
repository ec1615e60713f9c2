//! Two-copy reference stepper.
//!
//! Collides every cell, then copies each post-collision population into a
//! second buffer at its destination. Populations that would cross a wall are
//! bounced into the opposite slot of their own cell, with the moving-lid
//! momentum term subtracted for populations leaving through the top layer —
//! the same correction formula the swap kernels apply. Nothing is shared
//! with the in-place streaming path, so agreement between the two is a real
//! check.

use crate::error::{Error, Result};
use crate::kernels::{collide, lid_term, KernelParams};
use crate::lattice::{opp, DistributionField, Q, VELOCITIES};

/// Advances the field by one time step through a scratch buffer. Accepts any
/// box of at least 1x1x1.
pub fn oracle_step(field: &mut DistributionField, params: &KernelParams) -> Result<()> {
    let spec = field.spec();
    let mut next = vec![0.0_f64; field.data().len()];

    for ix in 1..=spec.lx {
        for iy in 1..=spec.ly {
            for iz in 1..=spec.lz {
                let cell = spec.cell_index(ix, iy, iz);
                let mut g = *field.cell(cell);
                collide(&mut g, params.omega)
                    .map_err(|_| Error::DegenerateMoments { cell: Some(cell) })?;

                next[cell * Q] = g[0];
                for dir in 1..Q {
                    let c = VELOCITIES[dir];
                    let nx = ix as i64 + c[0] as i64;
                    let ny = iy as i64 + c[1] as i64;
                    let nz = iz as i64 + c[2] as i64;
                    if spec.contains(nx, ny, nz) {
                        let dest = spec.cell_index(nx as usize, ny as usize, nz as usize);
                        next[dest * Q + dir] = g[dir];
                    } else {
                        // Wall crossing: bounce back in place; populations
                        // leaving through the top layer pick up the lid
                        // momentum term.
                        let mut value = g[dir];
                        if ix == spec.lx && c[0] == 1 {
                            value -= lid_term(dir, params);
                        }
                        next[cell * Q + opp(dir)] = value;
                    }
                }
            }
        }
    }

    std::mem::swap(field.data_vec_mut(), &mut next);
    Ok(())
}
