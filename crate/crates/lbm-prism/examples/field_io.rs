//! Serialize a field to the binary dump format, read it back bitwise, and
//! write the velocity-norm log.
//!
//!     cargo run -p lbm-prism --example field_io

use lbm_prism::cavity::{read_field_dump, write_field_dump, write_norm_log};
use lbm_prism::{build_cavity, run, CavityConfig, DomainSpec, SolverKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = DomainSpec::new(8, 8, 8)?;
    let mut config = CavityConfig::new(spec, SolverKind::Fuse);
    config.steps = 10;
    config.lid_speed = 0.1;

    let mut field = build_cavity(&config)?;
    run(config.solver, &mut field, &config.run_params()?)?;

    let dir = std::env::temp_dir();
    let dump = dir.join("lbm-prism-example.dump");
    let norms = dir.join("lbm-prism-example-norms.log");

    write_field_dump(&field, &dump)?;
    let bytes = std::fs::metadata(&dump)?.len();
    println!(
        "dump: {} ({} bytes = 24-byte header + {} cells x 19 slots x 8)",
        dump.display(),
        bytes,
        spec.cells()
    );

    let restored = read_field_dump(&dump)?;
    println!("round trip bitwise identical: {}", restored == field);

    write_norm_log(&field, &norms)?;
    let text = std::fs::read_to_string(&norms)?;
    println!("norm log: {} lines, first three:", text.lines().count());
    for line in text.lines().take(3) {
        println!("  {line}");
    }

    std::fs::remove_file(&dump).ok();
    std::fs::remove_file(&norms).ok();
    Ok(())
}
