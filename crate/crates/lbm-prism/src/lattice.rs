//! D3Q19 model constants, domain geometry, and single-copy field storage.
//!
//! The lattice couples each cell to 18 neighbors through discrete velocities
//! `c_i`. Directions are ordered so that indices 1..=9 are lexicographically
//! negative on (X, Y, Z) — their first nonzero component is −1 — and
//! direction `i + 9` is the exact opposite of direction `i`. An ascending
//! (X, Y, Z) sweep therefore always meets a cell's swap partners (the nine
//! neighbors at `c_1..c_9`) before the cell itself, which is what makes
//! in-place swap streaming safe.
//!
//! Populations are stored cell-major: 19 consecutive `f64` slots per cell,
//! cells ordered Z-fastest, then Y, then X.

use crate::error::{Error, Result};

/// Number of discrete velocities.
pub const Q: usize = 19;

/// Number of swap directions (directions 1..=HALF point at already-traversed
/// cells in an ascending sweep).
pub const HALF: usize = 9;

/// Discrete velocities `c_i`, one `[cX, cY, cZ]` triple per direction.
pub const VELOCITIES: [[i32; 3]; Q] = [
    [0, 0, 0],   //  0: rest
    [-1, 0, 0],  //  1
    [0, -1, 0],  //  2
    [0, 0, -1],  //  3
    [-1, -1, 0], //  4
    [-1, 1, 0],  //  5
    [-1, 0, -1], //  6
    [-1, 0, 1],  //  7
    [0, -1, -1], //  8
    [0, -1, 1],  //  9
    [1, 0, 0],   // 10 = -1
    [0, 1, 0],   // 11 = -2
    [0, 0, 1],   // 12 = -3
    [1, 1, 0],   // 13 = -4
    [1, -1, 0],  // 14 = -5
    [1, 0, 1],   // 15 = -6
    [1, 0, -1],  // 16 = -7
    [0, 1, 1],   // 17 = -8
    [0, 1, -1],  // 18 = -9
];

/// Quadrature weights `w_i`: 1/3 for rest, 1/18 for axis links, 1/36 for
/// planar diagonals.
pub const WEIGHTS: [f64; Q] = [
    1.0 / 3.0,
    1.0 / 18.0,
    1.0 / 18.0,
    1.0 / 18.0,
    1.0 / 36.0,
    1.0 / 36.0,
    1.0 / 36.0,
    1.0 / 36.0,
    1.0 / 36.0,
    1.0 / 36.0,
    1.0 / 18.0,
    1.0 / 18.0,
    1.0 / 18.0,
    1.0 / 36.0,
    1.0 / 36.0,
    1.0 / 36.0,
    1.0 / 36.0,
    1.0 / 36.0,
    1.0 / 36.0,
];

/// Opposite-direction index: `velocity(opp(i)) == -velocity(i)`.
#[inline(always)]
pub const fn opp(i: usize) -> usize {
    debug_assert!(i < Q);
    if i == 0 {
        0
    } else if i <= HALF {
        i + HALF
    } else {
        i - HALF
    }
}

/// Box dimensions: `lx` layers along X (height), `ly` rows along Y (width),
/// `lz` cells along Z (length).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DomainSpec {
    pub lx: usize,
    pub ly: usize,
    pub lz: usize,
}

impl DomainSpec {
    pub fn new(lx: usize, ly: usize, lz: usize) -> Result<Self> {
        if lx == 0 || ly == 0 || lz == 0 {
            return Err(Error::DomainTooSmall { lx, ly, lz, min: 1 });
        }
        Ok(Self { lx, ly, lz })
    }

    /// Total cell count.
    #[inline(always)]
    pub fn cells(&self) -> usize {
        self.lx * self.ly * self.lz
    }

    /// Flat cell offset of the 1-based coordinate (iX, iY, iZ). Z varies
    /// fastest, then Y, then X.
    #[inline(always)]
    pub fn cell_index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        debug_assert!(
            (1..=self.lx).contains(&ix)
                && (1..=self.ly).contains(&iy)
                && (1..=self.lz).contains(&iz),
            "cell ({ix},{iy},{iz}) outside {}x{}x{} domain",
            self.lx,
            self.ly,
            self.lz
        );
        ((ix - 1) * self.ly + (iy - 1)) * self.lz + (iz - 1)
    }

    /// Inverse of [`cell_index`](Self::cell_index): 1-based coordinates of a
    /// flat cell offset.
    #[inline]
    pub fn coords_of(&self, cell: usize) -> (usize, usize, usize) {
        debug_assert!(cell < self.cells());
        let iz = cell % self.lz;
        let iy = (cell / self.lz) % self.ly;
        let ix = cell / (self.lz * self.ly);
        (ix + 1, iy + 1, iz + 1)
    }

    /// Whether possibly-out-of-range signed coordinates fall inside the box.
    #[inline(always)]
    pub fn contains(&self, ix: i64, iy: i64, iz: i64) -> bool {
        ix >= 1
            && iy >= 1
            && iz >= 1
            && ix <= self.lx as i64
            && iy <= self.ly as i64
            && iz <= self.lz as i64
    }

    /// Whether the 1-based cell lies on one of the six box faces.
    #[inline(always)]
    pub fn on_boundary(&self, ix: usize, iy: usize, iz: usize) -> bool {
        ix == 1 || ix == self.lx || iy == 1 || iy == self.ly || iz == 1 || iz == self.lz
    }

    /// Visits every boundary cell (the six faces) exactly once.
    pub fn for_each_boundary_cell(&self, mut f: impl FnMut(usize, usize, usize)) {
        let (lx, ly, lz) = (self.lx, self.ly, self.lz);
        for ix in 1..=lx {
            let x_face = ix == 1 || ix == lx;
            for iy in 1..=ly {
                let y_face = iy == 1 || iy == ly;
                if x_face || y_face {
                    for iz in 1..=lz {
                        f(ix, iy, iz);
                    }
                } else {
                    f(ix, iy, 1);
                    if lz > 1 {
                        f(ix, iy, lz);
                    }
                }
            }
        }
    }
}

/// Computes `(rho, u)` from one cell's 19 populations.
///
/// `rho = Σ f_i`, `u = Σ c_i f_i / rho`. A zero density is reported as an
/// explicit error rather than silently dividing.
#[inline]
pub fn compute_moments(f: &[f64; Q]) -> Result<(f64, [f64; 3])> {
    let mut rho = 0.0;
    let mut ux = 0.0;
    let mut uy = 0.0;
    let mut uz = 0.0;
    for i in 0..Q {
        let fi = f[i];
        rho += fi;
        ux += fi * VELOCITIES[i][0] as f64;
        uy += fi * VELOCITIES[i][1] as f64;
        uz += fi * VELOCITIES[i][2] as f64;
    }
    if rho == 0.0 {
        return Err(Error::DegenerateMoments { cell: None });
    }
    Ok((rho, [ux / rho, uy / rho, uz / rho]))
}

/// Second-order BGK equilibrium:
/// `f_i^eq = w_i rho (1 + 3 c_i·u + 4.5 (c_i·u)^2 − 1.5 |u|^2)`.
#[inline]
pub fn equilibrium(rho: f64, u: [f64; 3]) -> [f64; Q] {
    let usqr = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    let mut f = [0.0; Q];
    for i in 0..Q {
        let cu = VELOCITIES[i][0] as f64 * u[0]
            + VELOCITIES[i][1] as f64 * u[1]
            + VELOCITIES[i][2] as f64 * u[2];
        f[i] = WEIGHTS[i] * rho * (1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * usqr);
    }
    f
}

/// Single-copy population storage for a whole box: `cells × 19` scalars,
/// cell-major, Z-fastest cell order.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionField {
    spec: DomainSpec,
    data: Vec<f64>,
}

impl DistributionField {
    /// Allocates a field with every cell at the given equilibrium.
    pub fn at_equilibrium(spec: DomainSpec, rho: f64, u: [f64; 3]) -> Result<Self> {
        let len = spec.cells() * Q;
        let feq = equilibrium(rho, u);
        let mut data = Vec::new();
        data.try_reserve_exact(len).map_err(|_| Error::Allocation {
            bytes: len * std::mem::size_of::<f64>(),
        })?;
        for _ in 0..spec.cells() {
            data.extend_from_slice(&feq);
        }
        Ok(Self { spec, data })
    }

    /// Wraps raw slot data; `data.len()` must equal `cells × 19`.
    pub fn from_raw(spec: DomainSpec, data: Vec<f64>) -> Result<Self> {
        if data.len() != spec.cells() * Q {
            return Err(Error::Format {
                offset: 0,
                message: format!(
                    "expected {} slots for a {}x{}x{} field, got {}",
                    spec.cells() * Q,
                    spec.lx,
                    spec.ly,
                    spec.lz,
                    data.len()
                ),
            });
        }
        Ok(Self { spec, data })
    }

    #[inline(always)]
    pub fn spec(&self) -> DomainSpec {
        self.spec
    }

    #[inline(always)]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline(always)]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub(crate) fn data_vec_mut(&mut self) -> &mut Vec<f64> {
        &mut self.data
    }

    /// The 19 populations of a cell.
    #[inline(always)]
    pub fn cell(&self, cell: usize) -> &[f64; Q] {
        let start = cell * Q;
        self.data[start..start + Q].try_into().unwrap()
    }

    #[inline(always)]
    pub fn cell_mut(&mut self, cell: usize) -> &mut [f64; Q] {
        let start = cell * Q;
        (&mut self.data[start..start + Q]).try_into().unwrap()
    }

    /// Mutable view used by the staged solver kernels. The borrow is
    /// exclusive, so a view obtained here is always race-free on its own.
    pub fn view_mut(&mut self) -> FieldView<'_> {
        FieldView {
            ptr: self.data.as_mut_ptr(),
            len: self.data.len(),
            spec: self.spec,
            _marker: std::marker::PhantomData,
        }
    }

    /// Largest absolute per-slot difference against another field of the same
    /// shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.spec, other.spec, "field shapes differ");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Raw mutable view over a field's slots.
///
/// Kernels mutate the lattice through this view instead of `&mut` references
/// so that the staged parallel solver can drive disjoint slot sets of one
/// field from several workers. Methods take `&self` and mutate, like a
/// `Cell`; the view is neither `Send` nor `Sync`, so safe code cannot share
/// it across threads — only the parallel module does, under its barrier
/// protocol.
#[derive(Clone, Copy)]
pub struct FieldView<'a> {
    ptr: *mut f64,
    len: usize,
    spec: DomainSpec,
    _marker: std::marker::PhantomData<&'a mut f64>,
}

impl FieldView<'_> {
    #[inline(always)]
    pub fn spec(&self) -> DomainSpec {
        self.spec
    }

    /// Identity of the underlying storage, used to tag trace events.
    #[cfg(debug_assertions)]
    #[inline(always)]
    pub(crate) fn key(&self) -> usize {
        self.ptr as usize
    }

    #[inline(always)]
    fn slot_index(&self, cell: usize, dir: usize) -> usize {
        debug_assert!(dir < Q);
        let idx = cell * Q + dir;
        debug_assert!(idx < self.len);
        idx
    }

    #[inline(always)]
    pub fn slot(&self, cell: usize, dir: usize) -> f64 {
        unsafe { *self.ptr.add(self.slot_index(cell, dir)) }
    }

    #[inline(always)]
    pub fn set_slot(&self, cell: usize, dir: usize, value: f64) {
        unsafe { *self.ptr.add(self.slot_index(cell, dir)) = value }
    }

    /// Exchanges slot `da` of cell `a` with slot `db` of cell `b`.
    #[inline(always)]
    pub fn swap_slots(&self, a: usize, da: usize, b: usize, db: usize) {
        let ia = self.slot_index(a, da);
        let ib = self.slot_index(b, db);
        debug_assert_ne!(ia, ib);
        unsafe { std::ptr::swap(self.ptr.add(ia), self.ptr.add(ib)) }
    }

    #[inline(always)]
    pub fn load_cell(&self, cell: usize) -> [f64; Q] {
        let base = self.slot_index(cell, 0);
        let mut out = [0.0; Q];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = unsafe { *self.ptr.add(base + i) };
        }
        out
    }

    #[inline(always)]
    pub fn store_cell(&self, cell: usize, values: &[f64; Q]) {
        let base = self.slot_index(cell, 0);
        for (i, &v) in values.iter().enumerate() {
            unsafe { *self.ptr.add(base + i) = v }
        }
    }
}

/// Per-cell velocity magnitudes `|u|`, in memory order.
pub fn velocity_norm_field(field: &DistributionField) -> Result<Vec<f64>> {
    let cells = field.spec().cells();
    let mut norms = Vec::new();
    norms
        .try_reserve_exact(cells)
        .map_err(|_| Error::Allocation {
            bytes: cells * std::mem::size_of::<f64>(),
        })?;
    for c in 0..cells {
        let (_, u) = compute_moments(field.cell(c))
            .map_err(|_| Error::DegenerateMoments { cell: Some(c) })?;
        norms.push((u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt());
    }
    Ok(norms)
}

/// Sum of every slot in the field — the conserved total mass.
pub fn total_mass(field: &DistributionField) -> f64 {
    field.data().iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        let sum: f64 = WEIGHTS.iter().sum();
        assert!((sum - 1.0).abs() < 1e-15, "sum = {sum}");
    }

    #[test]
    fn first_moment_of_weights_vanishes() {
        for axis in 0..3 {
            let m: f64 = (0..Q)
                .map(|i| WEIGHTS[i] * VELOCITIES[i][axis] as f64)
                .sum();
            assert!(m.abs() < 1e-16, "axis {axis}: {m}");
        }
    }

    #[test]
    fn second_moment_is_isotropic() {
        for a in 0..3 {
            for b in 0..3 {
                let m: f64 = (0..Q)
                    .map(|i| WEIGHTS[i] * VELOCITIES[i][a] as f64 * VELOCITIES[i][b] as f64)
                    .sum();
                let expected = if a == b { 1.0 / 3.0 } else { 0.0 };
                assert!((m - expected).abs() < 1e-15, "({a},{b}): {m}");
            }
        }
    }

    #[test]
    fn opp_is_an_involution_and_negates_velocity() {
        assert_eq!(opp(0), 0);
        assert_eq!(opp(3), 12);
        assert_eq!(opp(14), 5);
        for i in 0..Q {
            assert_eq!(opp(opp(i)), i);
            for axis in 0..3 {
                assert_eq!(VELOCITIES[opp(i)][axis], -VELOCITIES[i][axis]);
            }
            if i >= 1 && i <= HALF {
                assert_eq!(opp(i), i + HALF);
                assert_eq!(WEIGHTS[i + HALF], WEIGHTS[i]);
            }
        }
    }

    #[test]
    fn swap_directions_are_lexicographically_negative() {
        for i in 1..=HALF {
            let c = VELOCITIES[i];
            let first_nonzero = c.iter().find(|&&v| v != 0).copied();
            assert_eq!(first_nonzero, Some(-1), "direction {i}: {c:?}");
        }
        assert_eq!(VELOCITIES[0], [0, 0, 0]);
    }

    #[test]
    fn cell_index_strides() {
        let spec = DomainSpec::new(4, 16, 16).unwrap();
        assert_eq!(spec.cell_index(1, 1, 1), 0);
        assert_eq!(spec.cell_index(1, 2, 1), 16);
        assert_eq!(spec.cell_index(2, 1, 1), 256);
    }

    #[test]
    fn cell_index_is_a_bijection() {
        let spec = DomainSpec::new(3, 4, 5).unwrap();
        let mut seen = vec![false; spec.cells()];
        for ix in 1..=spec.lx {
            for iy in 1..=spec.ly {
                for iz in 1..=spec.lz {
                    let c = spec.cell_index(ix, iy, iz);
                    assert!(!seen[c]);
                    seen[c] = true;
                    assert_eq!(spec.coords_of(c), (ix, iy, iz));
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn boundary_enumeration_matches_predicate() {
        for (lx, ly, lz) in [(3, 3, 3), (4, 5, 6), (1, 4, 4), (3, 1, 5)] {
            let spec = DomainSpec::new(lx, ly, lz).unwrap();
            let mut seen = vec![0u32; spec.cells()];
            spec.for_each_boundary_cell(|x, y, z| seen[spec.cell_index(x, y, z)] += 1);
            for c in 0..spec.cells() {
                let (x, y, z) = spec.coords_of(c);
                let expected = u32::from(spec.on_boundary(x, y, z));
                assert_eq!(seen[c], expected, "cell ({x},{y},{z}) of {lx}x{ly}x{lz}");
            }
        }
    }

    #[test]
    fn moments_of_pure_weights() {
        let (rho, u) = compute_moments(&WEIGHTS).unwrap();
        assert!((rho - 1.0).abs() < 1e-15);
        assert!(u.iter().all(|c| c.abs() < 1e-15));

        let doubled: [f64; Q] = std::array::from_fn(|i| 2.0 * WEIGHTS[i]);
        let (rho2, u2) = compute_moments(&doubled).unwrap();
        assert!((rho2 - 2.0).abs() < 1e-15);
        assert!(u2.iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn moments_of_zero_field_are_degenerate() {
        assert!(matches!(
            compute_moments(&[0.0; Q]),
            Err(Error::DegenerateMoments { .. })
        ));
    }

    #[test]
    fn equilibrium_preserves_its_moments() {
        let f = equilibrium(1.0, [0.0, 0.0, 0.1]);
        let (rho, u) = compute_moments(&f).unwrap();
        assert!((rho - 1.0).abs() < 1e-14);
        assert!(u[0].abs() < 1e-14 && u[1].abs() < 1e-14);
        assert!((u[2] - 0.1).abs() < 1e-14);

        let f = equilibrium(1.2, [0.02, -0.01, 0.05]);
        let (rho, u) = compute_moments(&f).unwrap();
        assert!((rho - 1.2).abs() < 1e-14);
        assert!((u[0] - 0.02).abs() < 1e-14);
        assert!((u[1] + 0.01).abs() < 1e-14);
        assert!((u[2] - 0.05).abs() < 1e-14);
    }

    #[test]
    fn equilibrium_rest_slot_values() {
        let f = equilibrium(1.0, [0.0, 0.0, 0.0]);
        for i in 0..Q {
            assert_eq!(f[i], WEIGHTS[i]);
        }
        let f = equilibrium(1.0, [0.0, 0.0, 0.1]);
        // slot 0: (1/3) * (1 - 1.5 * 0.01)
        assert!((f[0] - (1.0 / 3.0) * (1.0 - 0.015)).abs() < 1e-16);
    }

    #[test]
    fn equilibrium_is_a_projection_fixed_point() {
        let f = equilibrium(1.1, [0.03, -0.02, 0.07]);
        let (rho, u) = compute_moments(&f).unwrap();
        let g = equilibrium(rho, u);
        for i in 0..Q {
            assert!((f[i] - g[i]).abs() <= 1e-14, "slot {i}");
        }
    }

    #[test]
    fn norm_field_shape_and_values() {
        let spec = DomainSpec::new(3, 4, 5).unwrap();
        let rest = DistributionField::at_equilibrium(spec, 1.0, [0.0, 0.0, 0.0]).unwrap();
        let norms = velocity_norm_field(&rest).unwrap();
        assert_eq!(norms.len(), spec.cells());
        assert!(norms.iter().all(|&n| n < 1e-15));

        let moving = DistributionField::at_equilibrium(spec, 1.0, [0.0, 0.0, 0.1]).unwrap();
        let norms = velocity_norm_field(&moving).unwrap();
        assert!(norms.iter().all(|&n| (n - 0.1).abs() < 1e-14));
    }

    #[test]
    fn mass_of_uniform_field() {
        let spec = DomainSpec::new(4, 4, 4).unwrap();
        let field = DistributionField::at_equilibrium(spec, 1.0, [0.0, 0.0, 0.0]).unwrap();
        assert!((total_mass(&field) - 64.0).abs() < 64.0 * 1e-12);

        let mut doubled = field.clone();
        doubled.data_mut().iter_mut().for_each(|v| *v *= 2.0);
        assert!((total_mass(&doubled) - 128.0).abs() < 128.0 * 1e-12);
    }
}
