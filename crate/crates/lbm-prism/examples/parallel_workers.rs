//! Run the slab-parallel stepper with several worker counts, check the
//! results against the sequential sweep, and report timings.
//!
//!     cargo run --release -p lbm-prism --example parallel_workers [LX] [STEPS]
//!
//! `LX` must be divisible by every worker count tried (slabs of at least 3
//! layers); the default 24 allows 1, 2, and 4 workers.

use lbm_prism::{build_cavity, run, CavityConfig, DomainSpec, SolverKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let lx: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(24);
    let steps: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(40);

    let spec = DomainSpec::new(lx, 32, 32)?;
    let mut config = CavityConfig::new(spec, SolverKind::TwoStepPrism);
    config.steps = steps;
    config.tile = 8;

    let sequential = {
        let mut field = build_cavity(&config)?;
        let report = run(SolverKind::TwoStepPrism, &mut field, &config.run_params()?)?;
        println!(
            "{:<26} {:>8.3} s {:>9.3} MFLUPS",
            "two-step-prism (seq)", report.seconds, report.mflups
        );
        field
    };

    config.solver = SolverKind::TwoStepPrismPar;
    for workers in [1, 2, 4] {
        if lx % workers != 0 || lx / workers < 3 {
            println!("workers {workers}: skipped (lx = {lx} not splittable)");
            continue;
        }
        config.workers = workers;
        let mut field = build_cavity(&config)?;
        let report = run(
            SolverKind::TwoStepPrismPar,
            &mut field,
            &config.run_params()?,
        )?;
        let dev = field.max_abs_diff(&sequential);
        println!(
            "{:<26} {:>8.3} s {:>9.3} MFLUPS   max|d slot| vs seq: {:.1e}",
            format!("two-step-prism-par W={workers}"),
            report.seconds,
            report.mflups,
            dev
        );
    }
    Ok(())
}
