//! Per-cell physics and streaming primitives.
//!
//! Streaming is performed in place by exchanging slot pairs across links
//! instead of copying into a second buffer. The protocol per cell and time
//! step is collide, then revert (each population swapped to its opposite
//! slot), then swap the nine backward links: slot `i + 9` of the cell is
//! exchanged with slot `i` of the neighbor at `c_i`, for `i = 1..=9`. Once
//! every cell has done this, every slot holds the correctly streamed
//! population. A link whose neighbor lies outside the box is skipped, which
//! leaves the reverted population in place — exactly full-way bounce-back at
//! a stationary wall. The moving lid adds a momentum term to the bounced
//! populations of the top layer at collide+revert time.
//!
//! All kernels write only their target cell and, when streaming, that cell's
//! nine backward neighbors. Concurrent use is safe only under the solver
//! module's staged disjoint-write contract.

use crate::error::{Error, Result};
use crate::lattice::{compute_moments, equilibrium, opp, FieldView, HALF, Q, VELOCITIES, WEIGHTS};

/// Directions whose X-component is +1: the populations that leave the box
/// through the top layer and receive the moving-lid momentum term.
pub const LID_LINKS: [usize; 5] = [10, 13, 14, 15, 16];

/// Relaxation and boundary parameters shared by every solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelParams {
    /// BGK relaxation rate, in the open interval (0, 2).
    pub omega: f64,
    /// Lid velocity; by convention `(0, 0, v)` with the lid at layer
    /// `iX = lx`.
    pub u_lid: [f64; 3],
    /// Wall density used by the lid momentum term.
    pub rho_wall: f64,
}

impl KernelParams {
    pub fn new(omega: f64, u_lid: [f64; 3]) -> Result<Self> {
        if !(omega > 0.0 && omega < 2.0) {
            return Err(Error::InvalidOmega { omega });
        }
        let speed = (u_lid[0] * u_lid[0] + u_lid[1] * u_lid[1] + u_lid[2] * u_lid[2]).sqrt();
        if !(speed <= 0.3) {
            return Err(Error::LidTooFast { speed });
        }
        Ok(Self {
            omega,
            u_lid,
            rho_wall: 1.0,
        })
    }

    /// Stationary-lid parameters for plain relaxation tests.
    pub fn still(omega: f64) -> Result<Self> {
        Self::new(omega, [0.0, 0.0, 0.0])
    }
}

/// BGK relaxation toward the local equilibrium:
/// `f_i ← f_i − omega (f_i − f_i^eq)`. Density and momentum are unchanged.
#[inline]
pub fn collide(f: &mut [f64; Q], omega: f64) -> Result<()> {
    let (rho, u) = compute_moments(f)?;
    let feq = equilibrium(rho, u);
    for i in 0..Q {
        f[i] -= omega * (f[i] - feq[i]);
    }
    Ok(())
}

/// Exchanges each population with its opposite slot (`i` with `i + 9`),
/// placing post-collision data where the swap expects it. Involution.
#[inline]
pub fn revert(f: &mut [f64; Q]) {
    for i in 1..=HALF {
        f.swap(i, i + HALF);
    }
}

/// Momentum term gained by a population bouncing off the moving lid:
/// `6 w_i rho_wall (c_i · u_lid)`.
#[inline]
pub(crate) fn lid_term(i: usize, params: &KernelParams) -> f64 {
    let c = VELOCITIES[i];
    let cu = c[0] as f64 * params.u_lid[0]
        + c[1] as f64 * params.u_lid[1]
        + c[2] as f64 * params.u_lid[2];
    6.0 * WEIGHTS[i] * params.rho_wall * cu
}

/// Applies the moving-wall bounce-back correction to a reverted top-layer
/// cell: for each outgoing direction `i` with `cX = +1`, slot `opp(i)` is
/// decremented by `6 w_i rho_wall (c_i · u_lid)`. Must run exactly once per
/// collide+revert of a lid cell, after the revert.
#[inline]
pub fn apply_lid_correction(f: &mut [f64; Q], params: &KernelParams) {
    for &i in &LID_LINKS {
        f[opp(i)] -= lid_term(i, params);
    }
}

/// Collide and revert one cell in place, applying the lid correction when
/// the cell sits on the top layer. The building block of every stage that
/// prepares cells for a later swap.
#[inline]
pub fn collide_revert(
    view: &FieldView<'_>,
    ix: usize,
    iy: usize,
    iz: usize,
    params: &KernelParams,
) -> Result<()> {
    let spec = view.spec();
    let cell = spec.cell_index(ix, iy, iz);
    let mut f = view.load_cell(cell);
    collide(&mut f, params.omega).map_err(|_| Error::DegenerateMoments { cell: Some(cell) })?;
    revert(&mut f);
    #[cfg(debug_assertions)]
    {
        crate::trace::record(view.key(), crate::trace::EventKind::Collide { cell });
        crate::trace::record(view.key(), crate::trace::EventKind::Revert { cell });
    }
    if ix == spec.lx {
        apply_lid_correction(&mut f, params);
        #[cfg(debug_assertions)]
        crate::trace::record(view.key(), crate::trace::EventKind::LidCorrection { cell });
    }
    view.store_cell(cell, &f);
    Ok(())
}

#[inline(always)]
fn neighbor(ix: usize, iy: usize, iz: usize, dir: usize) -> (i64, i64, i64) {
    let c = VELOCITIES[dir];
    (
        ix as i64 + c[0] as i64,
        iy as i64 + c[1] as i64,
        iz as i64 + c[2] as i64,
    )
}

/// Streams a collided-and-reverted bulk cell by exchanging slot `i + 9` with
/// slot `i` of the neighbor at `c_i`, for each backward direction. All nine
/// neighbors must be in-domain, already collided, and reverted, and none of
/// the nine links may have been swapped yet this step.
#[inline]
pub fn swap_stream(view: &FieldView<'_>, ix: usize, iy: usize, iz: usize) {
    let spec = view.spec();
    let cell = spec.cell_index(ix, iy, iz);
    for i in 1..=HALF {
        let (nx, ny, nz) = neighbor(ix, iy, iz, i);
        debug_assert!(
            spec.contains(nx, ny, nz),
            "swap_stream on ({ix},{iy},{iz}): neighbor in direction {i} outside the box"
        );
        let other = spec.cell_index(nx as usize, ny as usize, nz as usize);
        view.swap_slots(cell, i + HALF, other, i);
        #[cfg(debug_assertions)]
        crate::trace::record(
            view.key(),
            crate::trace::EventKind::LinkSwap { cell, dir: i },
        );
    }
    #[cfg(debug_assertions)]
    crate::trace::record(view.key(), crate::trace::EventKind::Stream { cell });
}

/// Boundary-tolerant variant of [`swap_stream`]: links whose neighbor lies
/// outside the box are skipped, leaving the reverted population in place
/// (full-way bounce-back).
#[inline]
pub fn boundary_swap_stream(view: &FieldView<'_>, ix: usize, iy: usize, iz: usize) {
    let spec = view.spec();
    let cell = spec.cell_index(ix, iy, iz);
    for i in 1..=HALF {
        let (nx, ny, nz) = neighbor(ix, iy, iz, i);
        if spec.contains(nx, ny, nz) {
            let other = spec.cell_index(nx as usize, ny as usize, nz as usize);
            view.swap_slots(cell, i + HALF, other, i);
            #[cfg(debug_assertions)]
            crate::trace::record(
                view.key(),
                crate::trace::EventKind::LinkSwap { cell, dir: i },
            );
        }
    }
    #[cfg(debug_assertions)]
    crate::trace::record(view.key(), crate::trace::EventKind::Stream { cell });
}

/// Full update of a bounding-box cell: collide, revert, lid correction when
/// on the top layer, then stream the in-domain links.
#[inline]
pub fn boundary_cell_comp(
    view: &FieldView<'_>,
    ix: usize,
    iy: usize,
    iz: usize,
    params: &KernelParams,
) -> Result<()> {
    debug_assert!(view.spec().on_boundary(ix, iy, iz));
    collide_revert(view, ix, iy, iz, params)?;
    boundary_swap_stream(view, ix, iy, iz);
    Ok(())
}

/// Full update of any cell, dispatching on its position: bounding-box cells
/// take the boundary path, inner cells collide, revert, and swap-stream.
#[inline]
pub fn adaptive_collide_stream(
    view: &FieldView<'_>,
    ix: usize,
    iy: usize,
    iz: usize,
    params: &KernelParams,
) -> Result<()> {
    if view.spec().on_boundary(ix, iy, iz) {
        boundary_cell_comp(view, ix, iy, iz, params)
    } else {
        collide_revert(view, ix, iy, iz, params)?;
        swap_stream(view, ix, iy, iz);
        Ok(())
    }
}

/// Stream-only dispatch for a cell whose collide and revert already ran in
/// an earlier stage. No lid correction — that belongs to collide+revert
/// time.
#[inline]
pub fn adaptive_stream(view: &FieldView<'_>, ix: usize, iy: usize, iz: usize) {
    if view.spec().on_boundary(ix, iy, iz) {
        boundary_swap_stream(view, ix, iy, iz);
    } else {
        swap_stream(view, ix, iy, iz);
    }
}

/// Second-step completion of lagged neighbors that the sweep diagonal never
/// reaches: the last column (z = lz) of the layer below as each row ends,
/// and the last row (y = ly) of the layer below as the sweep crosses it.
///
/// The last-row targets trail the current cell by TWO cells in Z, not one:
/// the target at `(ix−1, ly, iz−1)` streams to its lower-right neighbor
/// `(ix−1, ly−1, iz)`, which is exactly this visit's lagged diagonal — so
/// the target may only be finished once the diagonal of the NEXT cell in
/// the row has run. The final two row cells complete when the row ends.
/// Targets whose indices would fall below 1 are skipped.
#[inline]
pub fn boundary_neighbor_handler(
    view: &FieldView<'_>,
    ix: usize,
    iy: usize,
    iz: usize,
    params: &KernelParams,
) -> Result<()> {
    let spec = view.spec();
    if ix <= 1 {
        return Ok(());
    }
    if iz == spec.lz && iy > 1 {
        boundary_cell_comp(view, ix - 1, iy - 1, iz, params)?;
    }
    if iy == spec.ly && iz > 2 {
        boundary_cell_comp(view, ix - 1, iy, iz - 2, params)?;
    }
    if iy == spec.ly && iz == spec.lz {
        if iz > 1 {
            boundary_cell_comp(view, ix - 1, iy, iz - 1, params)?;
        }
        boundary_cell_comp(view, ix - 1, iy, iz, params)?;
    }
    Ok(())
}

/// Same trigger table as [`boundary_neighbor_handler`], but the targets only
/// collide and revert — their stream is deferred to a later stage of the
/// parallel protocol.
#[inline]
pub fn boundary_neighbor_collide_revert(
    view: &FieldView<'_>,
    ix: usize,
    iy: usize,
    iz: usize,
    params: &KernelParams,
) -> Result<()> {
    let spec = view.spec();
    if ix <= 1 {
        return Ok(());
    }
    if iz == spec.lz && iy > 1 {
        collide_revert(view, ix - 1, iy - 1, iz, params)?;
    }
    if iy == spec.ly && iz > 2 {
        collide_revert(view, ix - 1, iy, iz - 2, params)?;
    }
    if iy == spec.ly && iz == spec.lz {
        if iz > 1 {
            collide_revert(view, ix - 1, iy, iz - 1, params)?;
        }
        collide_revert(view, ix - 1, iy, iz, params)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DistributionField;
    use crate::test_util::random_field;

    fn params(omega: f64, v: f64) -> KernelParams {
        KernelParams::new(omega, [0.0, 0.0, v]).unwrap()
    }

    #[test]
    fn params_are_validated() {
        assert!(matches!(
            KernelParams::still(0.0),
            Err(Error::InvalidOmega { .. })
        ));
        assert!(matches!(
            KernelParams::still(2.0),
            Err(Error::InvalidOmega { .. })
        ));
        assert!(matches!(
            KernelParams::new(1.0, [0.0, 0.0, 0.4]),
            Err(Error::LidTooFast { .. })
        ));
        assert!(KernelParams::new(1.9, [0.0, 0.0, 0.3]).is_ok());
    }

    #[test]
    fn lid_links_are_the_upward_directions() {
        let expected: Vec<usize> = (0..Q).filter(|&i| VELOCITIES[i][0] == 1).collect();
        assert_eq!(LID_LINKS.to_vec(), expected);
    }

    #[test]
    fn collide_fixes_equilibrium() {
        let f0 = equilibrium(1.05, [0.01, -0.02, 0.03]);
        for omega in [0.3, 1.0, 1.7] {
            let mut f = f0;
            collide(&mut f, omega).unwrap();
            for i in 0..Q {
                assert!((f[i] - f0[i]).abs() <= 1e-15, "omega {omega}, slot {i}");
            }
        }
    }

    #[test]
    fn full_relaxation_lands_on_equilibrium() {
        let mut f = [0.0; Q];
        for (i, slot) in f.iter_mut().enumerate() {
            *slot = WEIGHTS[i] * (1.0 + 0.02 * i as f64);
        }
        let (rho, u) = compute_moments(&f).unwrap();
        let feq = equilibrium(rho, u);
        collide(&mut f, 1.0).unwrap();
        for i in 0..Q {
            assert!((f[i] - feq[i]).abs() <= 1e-15, "slot {i}");
        }
    }

    #[test]
    fn collide_conserves_moments() {
        let field = random_field(crate::lattice::DomainSpec::new(1, 1, 8).unwrap(), 42);
        for c in 0..8 {
            let mut f = *field.cell(c);
            let before = compute_moments(&f).unwrap();
            collide(&mut f, 1.6).unwrap();
            let after = compute_moments(&f).unwrap();
            assert!((before.0 - after.0).abs() <= 1e-14);
            for a in 0..3 {
                assert!((before.1[a] - after.1[a]).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn collide_rejects_zero_density() {
        let mut f = [0.0; Q];
        assert!(matches!(
            collide(&mut f, 1.0),
            Err(Error::DegenerateMoments { .. })
        ));
    }

    #[test]
    fn revert_is_an_involution() {
        let mut f: [f64; Q] = std::array::from_fn(|i| i as f64 + 0.5);
        let orig = f;
        revert(&mut f);
        assert_eq!(f[3], orig[12]);
        assert_eq!(f[12], orig[3]);
        assert_eq!(f[0], orig[0]);
        revert(&mut f);
        assert_eq!(f, orig);
    }

    #[test]
    fn rest_equilibrium_is_a_revert_fixed_point() {
        let mut f = equilibrium(1.0, [0.0, 0.0, 0.0]);
        let orig = f;
        revert(&mut f);
        assert_eq!(f, orig);
    }

    #[test]
    fn swap_exchanges_exactly_one_slot_pair_per_link() {
        let spec = crate::lattice::DomainSpec::new(3, 3, 3).unwrap();
        let mut field = random_field(spec, 7);
        let before = field.clone();
        let a = spec.cell_index(2, 2, 2);
        let b = spec.cell_index(1, 2, 2); // neighbor of (2,2,2) at c_1

        // Swap only link 1 by hand to isolate the pairing.
        let view = field.view_mut();
        view.swap_slots(a, 10, b, 1);
        assert_eq!(field.cell(a)[10], before.cell(b)[1]);
        assert_eq!(field.cell(b)[1], before.cell(a)[10]);
    }

    #[test]
    fn swap_stream_with_equal_operands_is_a_no_op() {
        // A spatially uniform field of reverted (opposite-symmetric)
        // populations: slot i+9 of a cell equals slot i of every neighbor,
        // so each exchange swaps equal values.
        let spec = crate::lattice::DomainSpec::new(3, 3, 3).unwrap();
        let mut field = DistributionField::at_equilibrium(spec, 1.3, [0.0, 0.0, 0.0]).unwrap();
        let before = field.clone();
        let view = field.view_mut();
        swap_stream(&view, 2, 2, 2);
        assert_eq!(field, before);
    }

    #[test]
    fn corner_cell_has_no_in_domain_swap_links() {
        let spec = crate::lattice::DomainSpec::new(3, 3, 3).unwrap();
        let mut field = random_field(spec, 9);
        let before = field.clone();
        let view = field.view_mut();
        boundary_swap_stream(&view, 1, 1, 1);
        assert_eq!(field, before, "all nine links of (1,1,1) leave the box");
    }

    #[test]
    fn boundary_swap_equals_bulk_swap_in_the_interior() {
        let spec = crate::lattice::DomainSpec::new(4, 4, 4).unwrap();
        let mut a = random_field(spec, 11);
        let mut b = a.clone();
        swap_stream(&a.view_mut(), 3, 3, 3);
        boundary_swap_stream(&b.view_mut(), 3, 3, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn lid_correction_at_rest_is_a_no_op() {
        let mut f: [f64; Q] = std::array::from_fn(|i| 0.1 + i as f64);
        let orig = f;
        apply_lid_correction(&mut f, &params(1.0, 0.0));
        assert_eq!(f, orig);
    }

    #[test]
    fn lid_correction_touches_only_the_tangential_slots() {
        let p = params(1.0, 0.12);
        let mut f: [f64; Q] = std::array::from_fn(|i| 1.0 + i as f64);
        let orig = f;
        apply_lid_correction(&mut f, &p);
        // u_lid = (0,0,v): only c_15 = (1,0,1) and c_16 = (1,0,-1) see the
        // lid motion; their bounce slots are opp(15) = 6 and opp(16) = 7.
        assert!((f[6] - (orig[6] - 0.12 / 6.0)).abs() < 1e-15);
        assert!((f[7] - (orig[7] + 0.12 / 6.0)).abs() < 1e-15);
        for i in 0..Q {
            if i != 6 && i != 7 {
                assert_eq!(f[i], orig[i], "slot {i}");
            }
        }
        // Tangential terms cancel pairwise: mass neutral.
        let ds: f64 = f.iter().zip(orig.iter()).map(|(a, b)| a - b).sum();
        assert!(ds.abs() < 1e-15);
    }

    #[test]
    fn boundary_cell_comp_is_the_composition_of_its_parts() {
        let spec = crate::lattice::DomainSpec::new(4, 4, 4).unwrap();
        let p = params(1.2, 0.1);
        let mut whole = random_field(spec, 13);
        let mut parts = whole.clone();

        boundary_cell_comp(&whole.view_mut(), 4, 2, 2, &p).unwrap();

        {
            let view = parts.view_mut();
            let cell = spec.cell_index(4, 2, 2);
            let mut f = view.load_cell(cell);
            collide(&mut f, p.omega).unwrap();
            revert(&mut f);
            apply_lid_correction(&mut f, &p); // iX = lx = 4: lid cell
            view.store_cell(cell, &f);
            boundary_swap_stream(&view, 4, 2, 2);
        }
        assert_eq!(whole, parts);
    }

    #[test]
    fn lid_cell_differs_from_stationary_wall_by_the_momentum_term() {
        let spec = crate::lattice::DomainSpec::new(4, 4, 4).unwrap();
        let v = 0.08;
        let mut moving = random_field(spec, 17);
        let mut still = moving.clone();
        // Collide+revert only (pre-swap) so the difference is visible.
        collide_revert(&moving.view_mut(), 4, 2, 2, &params(1.0, v)).unwrap();
        collide_revert(&still.view_mut(), 4, 2, 2, &params(1.0, 0.0)).unwrap();
        let cell = spec.cell_index(4, 2, 2);
        let m = moving.cell(cell);
        let s = still.cell(cell);
        assert!((m[6] - (s[6] - v / 6.0)).abs() < 1e-15);
        assert!((m[7] - (s[7] + v / 6.0)).abs() < 1e-15);
        for i in 0..Q {
            if i != 6 && i != 7 {
                assert_eq!(m[i], s[i], "slot {i}");
            }
        }
    }

    #[test]
    fn collide_revert_then_stream_decomposes_the_full_update() {
        let spec = crate::lattice::DomainSpec::new(4, 4, 4).unwrap();
        let p = params(1.4, 0.07);
        // A bulk cell, a wall cell, and a lid cell.
        for (x, y, z) in [(3, 3, 3), (2, 1, 3), (4, 2, 2)] {
            let mut split = random_field(spec, 41);
            let mut fused = split.clone();
            {
                let view = split.view_mut();
                collide_revert(&view, x, y, z, &p).unwrap();
                adaptive_stream(&view, x, y, z);
            }
            adaptive_collide_stream(&fused.view_mut(), x, y, z, &p).unwrap();
            assert_eq!(split, fused, "cell ({x},{y},{z})");
        }
    }

    #[test]
    fn adaptive_dispatch_predicate() {
        let spec = crate::lattice::DomainSpec::new(4, 5, 6).unwrap();
        for ix in 1..=spec.lx {
            for iy in 1..=spec.ly {
                for iz in 1..=spec.lz {
                    let expected = ix == 1
                        || ix == spec.lx
                        || iy == 1
                        || iy == spec.ly
                        || iz == 1
                        || iz == spec.lz;
                    assert_eq!(spec.on_boundary(ix, iy, iz), expected);
                }
            }
        }
        assert!(spec.on_boundary(1, 3, 3));
        assert!(!spec.on_boundary(2, 2, 2));
    }

    #[test]
    fn neighbor_handler_trigger_table() {
        let spec = crate::lattice::DomainSpec::new(4, 4, 4).unwrap();
        let p = params(1.1, 0.05);
        let (ly, lz) = (spec.ly, spec.lz);

        // Last cell of a layer finishes the lagged column cell and the tail
        // of the last row below, in dependency order.
        let mut handled = random_field(spec, 19);
        let mut manual = handled.clone();
        boundary_neighbor_handler(&handled.view_mut(), 3, ly, lz, &p).unwrap();
        {
            let view = manual.view_mut();
            boundary_cell_comp(&view, 2, ly - 1, lz, &p).unwrap();
            boundary_cell_comp(&view, 2, ly, lz - 2, &p).unwrap();
            boundary_cell_comp(&view, 2, ly, lz - 1, &p).unwrap();
            boundary_cell_comp(&view, 2, ly, lz, &p).unwrap();
        }
        assert_eq!(handled, manual);

        // Mid-row visit in the last row: one target, two cells behind.
        let mut handled = random_field(spec, 21);
        let mut manual = handled.clone();
        boundary_neighbor_handler(&handled.view_mut(), 3, ly, 3, &p).unwrap();
        boundary_cell_comp(&manual.view_mut(), 2, ly, 1, &p).unwrap();
        assert_eq!(handled, manual);

        // Interior cells trigger nothing.
        let mut f = random_field(spec, 23);
        let before = f.clone();
        boundary_neighbor_handler(&f.view_mut(), 3, 2, 2, &p).unwrap();
        assert_eq!(f, before);

        // Row 1: the (iX-1, 0, lz) target is skipped by the index guard.
        let mut f = random_field(spec, 29);
        let before = f.clone();
        boundary_neighbor_handler(&f.view_mut(), 3, 1, lz, &p).unwrap();
        assert_eq!(f, before);

        // Layer 1: all targets would leave the box.
        let mut f = random_field(spec, 33);
        let before = f.clone();
        boundary_neighbor_handler(&f.view_mut(), 1, ly, lz, &p).unwrap();
        assert_eq!(f, before);
    }

    #[test]
    fn neighbor_collide_revert_shares_the_trigger_table_without_streaming() {
        let spec = crate::lattice::DomainSpec::new(4, 4, 4).unwrap();
        let p = params(1.3, 0.05);
        let (ly, lz) = (spec.ly, spec.lz);

        let mut handled = random_field(spec, 31);
        let mut manual = handled.clone();
        boundary_neighbor_collide_revert(&handled.view_mut(), 3, ly, lz, &p).unwrap();
        {
            let view = manual.view_mut();
            collide_revert(&view, 2, ly - 1, lz, &p).unwrap();
            collide_revert(&view, 2, ly, lz - 2, &p).unwrap();
            collide_revert(&view, 2, ly, lz - 1, &p).unwrap();
            collide_revert(&view, 2, ly, lz, &p).unwrap();
        }
        assert_eq!(handled, manual);
    }

    #[cfg(debug_assertions)]
    #[test]
    fn neighbor_collide_revert_leaves_targets_unstreamed() {
        let spec = crate::lattice::DomainSpec::new(4, 4, 4).unwrap();
        let p = params(1.3, 0.0);
        let mut field = random_field(spec, 37);
        let key = field.data().as_ptr() as usize;
        let (_, log) = crate::trace::capture(|| {
            boundary_neighbor_collide_revert(&field.view_mut(), 3, spec.ly, spec.lz, &p).unwrap();
        });
        let events = crate::trace::events_for(&log, key);
        let collides = events
            .iter()
            .filter(|(_, k)| matches!(k, crate::trace::EventKind::Collide { .. }))
            .count();
        let streams = events
            .iter()
            .filter(|(_, k)| {
                matches!(
                    k,
                    crate::trace::EventKind::Stream { .. }
                        | crate::trace::EventKind::LinkSwap { .. }
                )
            })
            .count();
        assert_eq!(collides, 4, "four targets collided and reverted");
        assert_eq!(streams, 0, "no target may stream");
    }
}
