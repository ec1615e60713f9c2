//! Visualize the prism traversal: print which prism visits each cell of a
//! 4x16x16 box with stride 4, layer by layer.
//!
//!     cargo run -p lbm-prism --example prism_traversal
//!
//! Cells sharing a number belong to one prism. On layer 1 the footprints
//! are squares; each layer up, a prism's window shifts one row forward in Y
//! and one cell left in Z, so the stack forms pyramids near the walls and
//! parallelepipeds in the middle — exactly the order that keeps every
//! backward swap partner ahead of the cell that needs it.

use lbm_prism::{DomainSpec, PrismCursor};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = DomainSpec::new(4, 16, 16)?;
    let cursor = PrismCursor::full(spec, 4)?;

    let blocks = cursor.blocks();
    println!(
        "{}x{}x{} box, stride {}: {} prisms",
        spec.lx,
        spec.ly,
        spec.lz,
        cursor.tile(),
        blocks.len()
    );

    // Prism ordinal per cell.
    let mut owner = vec![0usize; spec.cells()];
    for (ordinal, &block) in blocks.iter().enumerate() {
        cursor.for_each_cell_in(block, |x, y, z| {
            owner[spec.cell_index(x, y, z)] = ordinal + 1;
        });
    }

    for ix in 1..=spec.lx {
        println!("\nlayer iX = {ix} (rows = Y, columns = Z):");
        for iy in 1..=spec.ly {
            let row: Vec<String> = (1..=spec.lz)
                .map(|iz| format!("{:>2}", owner[spec.cell_index(ix, iy, iz)]))
                .collect();
            println!("  {}", row.join(" "));
        }
    }

    // The traversal is a permutation: every cell visited exactly once.
    let mut count = 0usize;
    cursor.for_each(|_, _, _| count += 1);
    println!("\nvisited {count} cells ({} expected)", spec.cells());
    Ok(())
}
