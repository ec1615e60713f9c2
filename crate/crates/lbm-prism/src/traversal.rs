//! Prism traversal: the tiled visitation order that keeps in-place swap
//! streaming and the merged two-step update legal while improving locality.
//!
//! The domain is covered by `tile`-sized blocks, X outermost and Z innermost.
//! Inside a block, each step up in X shifts the Y-window forward by one and
//! the Z-window left by one, and each step in Y shifts the Z-window left by
//! one more. A swap exchanges data with neighbors one row forward and one
//! cell left on the layer below, so the shifted windows guarantee that by
//! the time a cell is visited, all nine of its backward swap partners have
//! been visited, and that the cell diagonally behind it — at
//! `(x−1, y−1, z−1)` — already has its whole forward neighborhood complete.
//! The resulting footprints are pyramid or parallelepiped prisms; window
//! bounds that fall outside the box are clamped, truncating the prisms at
//! the walls.

use crate::error::{Error, Result};
use crate::lattice::DomainSpec;

/// Generator of the prism visitation order over an inclusive X-range.
///
/// The cursor is pure: it never touches field data, so the same type drives
/// the bulk sweep of the fused solvers, the merged two-step sweep, and each
/// parallel worker's sub-domain (via `x_range`).
#[derive(Clone, Copy, Debug)]
pub struct PrismCursor {
    spec: DomainSpec,
    tile: usize,
    x0: usize,
    x1: usize,
}

impl PrismCursor {
    /// Cursor over layers `x0..=x1` with the given stride.
    pub fn new(spec: DomainSpec, tile: usize, x0: usize, x1: usize) -> Result<Self> {
        if tile == 0 || x0 == 0 || x0 > x1 || x1 > spec.lx {
            return Err(Error::Format {
                offset: 0,
                message: format!(
                    "invalid prism cursor: tile {tile}, x-range [{x0}, {x1}] in lx = {}",
                    spec.lx
                ),
            });
        }
        Ok(Self { spec, tile, x0, x1 })
    }

    /// Cursor over the whole domain.
    pub fn full(spec: DomainSpec, tile: usize) -> Result<Self> {
        Self::new(spec, tile, 1, spec.lx)
    }

    pub fn spec(&self) -> DomainSpec {
        self.spec
    }

    pub fn tile(&self) -> usize {
        self.tile
    }

    pub fn x_range(&self) -> (usize, usize) {
        (self.x0, self.x1)
    }

    /// Visits every block origin `(outerX, outerY, outerZ)` in traversal
    /// order. The Y and Z ranges overshoot the box so that shifted windows
    /// near the far walls still get covered.
    pub fn for_each_block(&self, mut f: impl FnMut(usize, usize, usize)) {
        let DomainSpec { ly, lz, .. } = self.spec;
        let tile = self.tile;
        let mut outer_x = self.x0;
        while outer_x <= self.x1 {
            let mut outer_y = 1;
            while outer_y <= ly + tile - 1 {
                let mut outer_z = 1;
                while outer_z <= lz + 2 * (tile - 1) {
                    f(outer_x, outer_y, outer_z);
                    outer_z += tile;
                }
                outer_y += tile;
            }
            outer_x += tile;
        }
    }

    /// Visits the cells of one block in traversal order, applying the
    /// forward (Y) and leftward (Z) shifts and clamping to the box. May
    /// visit nothing for blocks whose shifted windows fall entirely outside.
    pub fn try_for_each_cell_in<E>(
        &self,
        block: (usize, usize, usize),
        mut f: impl FnMut(usize, usize, usize) -> std::result::Result<(), E>,
    ) -> std::result::Result<(), E> {
        let DomainSpec { ly, lz, .. } = self.spec;
        let tile = self.tile as i64;
        let (outer_x, outer_y, outer_z) = block;

        let inner_x_end = (outer_x + self.tile - 1).min(self.x1);
        let mut dx: i64 = 0;
        for inner_x in outer_x..=inner_x_end {
            let min_y = outer_y as i64 - dx; // forward shift
            let max_y = min_y + tile - 1;
            let mut dy: i64 = 0;
            for inner_y in min_y.max(1)..=max_y.min(ly as i64) {
                let min_z = outer_z as i64 - dx - dy; // leftward shift
                let max_z = min_z + tile - 1;
                for inner_z in min_z.max(1)..=max_z.min(lz as i64) {
                    f(inner_x, inner_y as usize, inner_z as usize)?;
                }
                dy += 1;
            }
            dx += 1;
        }
        Ok(())
    }

    pub fn for_each_cell_in(
        &self,
        block: (usize, usize, usize),
        mut f: impl FnMut(usize, usize, usize),
    ) {
        let infallible = self.try_for_each_cell_in::<std::convert::Infallible>(block, |x, y, z| {
            f(x, y, z);
            Ok(())
        });
        match infallible {
            Ok(()) => {}
        }
    }

    /// Visits every cell of the X-range exactly once, prism by prism.
    pub fn try_for_each<E>(
        &self,
        mut f: impl FnMut(usize, usize, usize) -> std::result::Result<(), E>,
    ) -> std::result::Result<(), E> {
        let mut result = Ok(());
        self.for_each_block(|bx, by, bz| {
            if result.is_ok() {
                result = self.try_for_each_cell_in((bx, by, bz), &mut f);
            }
        });
        result
    }

    pub fn for_each(&self, mut f: impl FnMut(usize, usize, usize)) {
        let infallible = self.try_for_each::<std::convert::Infallible>(|x, y, z| {
            f(x, y, z);
            Ok(())
        });
        match infallible {
            Ok(()) => {}
        }
    }

    /// Block origins in traversal order.
    pub fn blocks(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        self.for_each_block(|x, y, z| out.push((x, y, z)));
        out
    }

    /// Cells of one block in traversal order.
    pub fn cells_in(&self, block: (usize, usize, usize)) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        self.for_each_cell_in(block, |x, y, z| out.push((x, y, z)));
        out
    }

    /// The full visitation sequence — a permutation of
    /// `x_range × [1, ly] × [1, lz]`.
    pub fn enumerate(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity((self.x1 - self.x0 + 1) * self.spec.ly * self.spec.lz);
        self.for_each(|x, y, z| out.push((x, y, z)));
        out
    }
}
