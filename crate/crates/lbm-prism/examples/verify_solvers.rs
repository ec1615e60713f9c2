//! Cross-check every stepper against the two-copy reference on a small
//! cavity and print the per-solver deviation table.
//!
//!     cargo run --release -p lbm-prism --example verify_solvers

use lbm_prism::{build_cavity, run, velocity_norm_field, CavityConfig, DomainSpec, SolverKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = DomainSpec::new(12, 10, 9)?;
    let mut config = CavityConfig::new(spec, SolverKind::Oracle);
    config.steps = 8;
    config.tile = 4;
    config.workers = 2;

    let initial = build_cavity(&config)?;
    let params = config.run_params()?;

    let mut reference = initial.clone();
    run(SolverKind::Oracle, &mut reference, &params)?;
    let ref_norms = velocity_norm_field(&reference)?;

    println!(
        "verifying on {}x{}x{}, {} steps, tile {}, workers {}",
        spec.lx, spec.ly, spec.lz, config.steps, config.tile, config.workers
    );
    println!("{:<22} {:>14}", "solver", "max|d norm|");
    for kind in SolverKind::ALL
        .into_iter()
        .filter(|k| *k != SolverKind::Oracle)
    {
        let mut field = initial.clone();
        run(kind, &mut field, &params)?;
        let norms = velocity_norm_field(&field)?;
        let dev = norms
            .iter()
            .zip(&ref_norms)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!("{:<22} {:>14.3e}", kind.name(), dev);
    }
    Ok(())
}
