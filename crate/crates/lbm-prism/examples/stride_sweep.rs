//! Sweep the prism stride on a mid-size cavity and compare the merged
//! two-step stepper against the fused baseline.
//!
//!     cargo run --release -p lbm-prism --example stride_sweep [L] [STEPS]
//!
//! Larger boxes (128+) show the locality effect best; the default stays
//! small enough to finish in seconds.

use lbm_prism::{build_cavity, run, CavityConfig, DomainSpec, SolverKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let l: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(64);
    let steps: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20);

    let spec = DomainSpec::new(l, l, l)?;
    let mut config = CavityConfig::new(spec, SolverKind::Fuse);
    config.steps = steps;

    let fuse_mflups = {
        let mut field = build_cavity(&config)?;
        run(SolverKind::Fuse, &mut field, &config.run_params()?)?.mflups
    };
    println!("{:<18} {:>10.3} MFLUPS", "fuse", fuse_mflups);

    let mut best = (0usize, 0.0f64);
    for tile in [8, 16, 32, 64] {
        if tile > l {
            continue;
        }
        config.tile = tile;
        let mut field = build_cavity(&config)?;
        let mflups = run(SolverKind::TwoStepPrism, &mut field, &config.run_params()?)?.mflups;
        println!("two-step-prism/{tile:<3} {mflups:>10.3} MFLUPS");
        if mflups > best.1 {
            best = (tile, mflups);
        }
    }

    println!(
        "\nbest stride {} -> {:.3} MFLUPS, {:.3}x the fused baseline",
        best.0,
        best.1,
        best.1 / fuse_mflups
    );
    Ok(())
}
