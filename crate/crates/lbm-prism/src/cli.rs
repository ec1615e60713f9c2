//! Command-line surface: run a solver, verify every solver against the
//! two-copy reference, and benchmark stride/worker sweeps.
//!
//! Exit codes: 0 success, 1 verification or runtime failure, 2 usage error.

use crate::cavity::{
    append_bench_records, build_cavity, write_field_dump, write_norm_log, BenchRecord,
    CavityConfig, Rep,
};
use crate::lattice::{velocity_norm_field, DomainSpec};
use crate::solvers::{run, RunParams, SolverKind};
use std::path::PathBuf;

const USAGE: &str = "\
usage: lbm-prism <command> [flags]

commands:
  run     --solver KIND --dims LX,LY,LZ --steps N
          [--omega F] [--u-lid F] [--tile N] [--workers N]
          [--dump PATH] [--norms PATH] [--csv PATH]
  verify  --dims LX,LY,LZ --steps N (even)
          [--tol F] [--tile N] [--workers N] [--omega F] [--u-lid F]
  bench   --dims LX,LY,LZ --steps N
          [--solvers LIST] [--tiles LIST] [--workers LIST]
          [--repeat N] [--csv PATH] [--omega F] [--u-lid F]

solver kinds: oracle, fuse, fuse-prism, two-step, two-step-prism,
              two-step-prism-par";

/// Entry point for the thin binary; takes the arguments after the program
/// name and returns the process exit code.
pub fn run_cli(args: impl IntoIterator<Item = String>) -> i32 {
    let mut args = args.into_iter();
    let Some(command) = args.next() else {
        eprintln!("{USAGE}");
        return 2;
    };
    match command.as_str() {
        "run" => match RunFlags::parse(args) {
            Ok(flags) => cmd_run(&flags),
            Err(msg) => usage_error(&msg),
        },
        "verify" => match VerifyFlags::parse(args) {
            Ok(flags) => cmd_verify(&flags),
            Err(msg) => usage_error(&msg),
        },
        "bench" => match BenchFlags::parse(args) {
            Ok(flags) => cmd_bench(&flags),
            Err(msg) => usage_error(&msg),
        },
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            0
        }
        other => usage_error(&format!("unknown command '{other}'")),
    }
}

fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn next_value(args: &mut impl Iterator<Item = String>, flag: &str) -> Result<String, String> {
    args.next()
        .ok_or_else(|| format!("flag {flag} needs a value"))
}

fn parse_num<T: std::str::FromStr>(s: &str, flag: &str) -> Result<T, String> {
    s.parse()
        .map_err(|_| format!("flag {flag}: cannot parse '{s}'"))
}

fn parse_dims(s: &str) -> Result<DomainSpec, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("--dims expects LX,LY,LZ, got '{s}'"));
    }
    let lx = parse_num(parts[0], "--dims")?;
    let ly = parse_num(parts[1], "--dims")?;
    let lz = parse_num(parts[2], "--dims")?;
    DomainSpec::new(lx, ly, lz).map_err(|e| e.to_string())
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    SolverKind::parse(s).ok_or_else(|| {
        format!(
            "unknown solver '{s}' (expected one of: {})",
            SolverKind::ALL.map(|k| k.name()).join(", ")
        )
    })
}

fn parse_list<T>(
    s: &str,
    flag: &str,
    f: impl Fn(&str) -> Result<T, String>,
) -> Result<Vec<T>, String> {
    let items: Result<Vec<T>, String> = s.split(',').map(|p| f(p.trim())).collect();
    let items = items.map_err(|e| format!("{flag}: {e}"))?;
    if items.is_empty() {
        return Err(format!("{flag} must not be empty"));
    }
    Ok(items)
}

#[derive(Debug)]
pub struct RunFlags {
    pub solver: SolverKind,
    pub spec: DomainSpec,
    pub steps: usize,
    pub omega: f64,
    pub u_lid: f64,
    pub tile: usize,
    pub workers: usize,
    pub dump: Option<PathBuf>,
    pub norms: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl RunFlags {
    fn parse(mut args: impl Iterator<Item = String>) -> Result<Self, String> {
        let (mut solver, mut spec, mut steps) = (None, None, None);
        let (mut omega, mut u_lid, mut tile, mut workers) = (1.0, 0.05, 8, 1);
        let (mut dump, mut norms, mut csv) = (None, None, None);
        while let Some(arg) = args.next() {
            match arg.as_str() {
                "--solver" => solver = Some(parse_solver(&next_value(&mut args, &arg)?)?),
                "--dims" => spec = Some(parse_dims(&next_value(&mut args, &arg)?)?),
                "--steps" => steps = Some(parse_num(&next_value(&mut args, &arg)?, &arg)?),
                "--omega" => omega = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                "--u-lid" => u_lid = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                "--tile" => tile = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                "--workers" => workers = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                "--dump" => dump = Some(PathBuf::from(next_value(&mut args, &arg)?)),
                "--norms" => norms = Some(PathBuf::from(next_value(&mut args, &arg)?)),
                "--csv" => csv = Some(PathBuf::from(next_value(&mut args, &arg)?)),
                other => return Err(format!("unknown flag '{other}' for run")),
            }
        }
        Ok(Self {
            solver: solver.ok_or("run: missing required flag --solver")?,
            spec: spec.ok_or("run: missing required flag --dims")?,
            steps: steps.ok_or("run: missing required flag --steps")?,
            omega,
            u_lid,
            tile,
            workers,
            dump,
            norms,
            csv,
        })
    }
}

/// Executes one solver run and writes the requested artifacts.
pub fn cmd_run(flags: &RunFlags) -> i32 {
    // Validate everything before the field is allocated.
    let mut config = CavityConfig::new(flags.spec, flags.solver);
    config.omega = flags.omega;
    config.lid_speed = flags.u_lid;
    config.steps = flags.steps;
    config.tile = flags.tile;
    config.workers = flags.workers;
    let params = match config.run_params() {
        Ok(p) => p,
        Err(e) => return usage_error(&e.to_string()),
    };
    if let Err(e) = params.validate(flags.solver, flags.spec) {
        return usage_error(&e.to_string());
    }

    let outcome = (|| -> crate::error::Result<()> {
        let mut field = build_cavity(&config)?;
        let report = run(flags.solver, &mut field, &params)?;
        println!(
            "{} {}x{}x{} steps={} tile={} workers={}",
            flags.solver,
            flags.spec.lx,
            flags.spec.ly,
            flags.spec.lz,
            flags.steps,
            flags.tile,
            flags.workers
        );
        println!(
            "elapsed {:.6} s, {:.3} MFLUPS, relative mass drift {:.3e}",
            report.seconds, report.mflups, report.mass_drift
        );
        if let Some(path) = &flags.dump {
            write_field_dump(&field, path)?;
            println!("wrote field dump to {}", path.display());
        }
        if let Some(path) = &flags.norms {
            write_norm_log(&field, path)?;
            println!("wrote velocity-norm log to {}", path.display());
        }
        if let Some(path) = &flags.csv {
            let record = BenchRecord {
                solver: flags.solver,
                spec: flags.spec,
                tile: flags.tile,
                workers: flags.workers,
                steps: flags.steps,
                seconds: report.seconds,
                mflups: report.mflups,
                rep: Rep::Index(0),
            };
            append_bench_records(path, &[record])?;
            println!("appended record to {}", path.display());
        }
        Ok(())
    })();

    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[derive(Debug)]
pub struct VerifyFlags {
    pub spec: DomainSpec,
    pub steps: usize,
    pub tol: f64,
    pub tile: usize,
    pub workers: usize,
    pub omega: f64,
    pub u_lid: f64,
}

impl VerifyFlags {
    fn parse(mut args: impl Iterator<Item = String>) -> Result<Self, String> {
        let (mut spec, mut steps) = (None, None);
        let (mut tol, mut tile, mut workers, mut omega, mut u_lid) = (1e-12, 8, 1, 1.0, 0.05);
        while let Some(arg) = args.next() {
            match arg.as_str() {
                "--dims" => spec = Some(parse_dims(&next_value(&mut args, &arg)?)?),
                "--steps" => steps = Some(parse_num(&next_value(&mut args, &arg)?, &arg)?),
                "--tol" => tol = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                "--tile" => tile = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                "--workers" => workers = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                "--omega" => omega = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                "--u-lid" => u_lid = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                other => return Err(format!("unknown flag '{other}' for verify")),
            }
        }
        Ok(Self {
            spec: spec.ok_or("verify: missing required flag --dims")?,
            steps: steps.ok_or("verify: missing required flag --steps")?,
            tol,
            tile,
            workers,
            omega,
            u_lid,
        })
    }
}

/// Runs the reference stepper once, then every other kind, and prints the
/// per-solver maximum velocity-norm deviation.
pub fn cmd_verify(flags: &VerifyFlags) -> i32 {
    let mut config = CavityConfig::new(flags.spec, SolverKind::Oracle);
    config.omega = flags.omega;
    config.lid_speed = flags.u_lid;
    config.steps = flags.steps;
    config.tile = flags.tile;
    config.workers = flags.workers;

    let base_params = match config.run_params() {
        Ok(p) => p,
        Err(e) => return usage_error(&e.to_string()),
    };
    // Every kind must be runnable with these flags before anything starts.
    for kind in SolverKind::ALL {
        if let Err(e) = base_params.validate(kind, flags.spec) {
            return usage_error(&format!("{kind}: {e}"));
        }
    }

    let outcome = (|| -> crate::error::Result<i32> {
        let initial = build_cavity(&config)?;
        let mut reference = initial.clone();
        run(SolverKind::Oracle, &mut reference, &base_params)?;
        let ref_norms = velocity_norm_field(&reference)?;

        println!("{:<22} {:>14}   worst cell", "solver", "max|d norm|");
        let mut worst: Option<(SolverKind, f64, (usize, usize, usize))> = None;
        for kind in SolverKind::ALL
            .into_iter()
            .filter(|k| *k != SolverKind::Oracle)
        {
            let mut field = initial.clone();
            run(kind, &mut field, &base_params)?;
            let norms = velocity_norm_field(&field)?;
            let (mut max_dev, mut argmax) = (0.0_f64, 0);
            for (cell, (a, b)) in norms.iter().zip(&ref_norms).enumerate() {
                let d = (a - b).abs();
                if d > max_dev {
                    max_dev = d;
                    argmax = cell;
                }
            }
            let coords = flags.spec.coords_of(argmax);
            println!(
                "{:<22} {:>14.3e}   ({},{},{})",
                kind.name(),
                max_dev,
                coords.0,
                coords.1,
                coords.2
            );
            if max_dev > flags.tol && worst.map_or(true, |(_, w, _)| max_dev > w) {
                worst = Some((kind, max_dev, coords));
            }
        }

        match worst {
            None => {
                println!("verification passed (tol {:.1e})", flags.tol);
                Ok(0)
            }
            Some((kind, dev, (x, y, z))) => {
                eprintln!(
                    "verification FAILED: {kind} deviates {dev:.3e} at cell ({x},{y},{z}), tol {:.1e}",
                    flags.tol
                );
                Ok(1)
            }
        }
    })();

    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[derive(Debug)]
pub struct BenchFlags {
    pub spec: DomainSpec,
    pub steps: usize,
    pub solvers: Vec<SolverKind>,
    pub tiles: Vec<usize>,
    pub workers: Vec<usize>,
    pub repeat: usize,
    pub csv: Option<PathBuf>,
    pub omega: f64,
    pub u_lid: f64,
}

impl BenchFlags {
    fn parse(mut args: impl Iterator<Item = String>) -> Result<Self, String> {
        let (mut spec, mut steps) = (None, None);
        let mut solvers = vec![
            SolverKind::Fuse,
            SolverKind::FusePrism,
            SolverKind::TwoStep,
            SolverKind::TwoStepPrism,
        ];
        let mut tiles = vec![8, 16, 32];
        let mut workers = vec![1];
        let mut repeat = 5;
        let mut csv = None;
        let (mut omega, mut u_lid) = (1.0, 0.05);
        while let Some(arg) = args.next() {
            match arg.as_str() {
                "--dims" => spec = Some(parse_dims(&next_value(&mut args, &arg)?)?),
                "--steps" => steps = Some(parse_num(&next_value(&mut args, &arg)?, &arg)?),
                "--solvers" => {
                    solvers = parse_list(&next_value(&mut args, &arg)?, &arg, parse_solver)?
                }
                "--tiles" => {
                    tiles = parse_list(&next_value(&mut args, &arg)?, &arg, |s| {
                        parse_num(s, "--tiles")
                    })?
                }
                "--workers" => {
                    workers = parse_list(&next_value(&mut args, &arg)?, &arg, |s| {
                        parse_num(s, "--workers")
                    })?
                }
                "--repeat" => repeat = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                "--csv" => csv = Some(PathBuf::from(next_value(&mut args, &arg)?)),
                "--omega" => omega = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                "--u-lid" => u_lid = parse_num(&next_value(&mut args, &arg)?, &arg)?,
                other => return Err(format!("unknown flag '{other}' for bench")),
            }
        }
        if repeat == 0 {
            return Err("--repeat must be at least 1".into());
        }
        Ok(Self {
            spec: spec.ok_or("bench: missing required flag --dims")?,
            steps: steps.ok_or("bench: missing required flag --steps")?,
            solvers,
            tiles,
            workers,
            repeat,
            csv,
            omega,
            u_lid,
        })
    }
}

/// Executes the full solver × worker × tile × repeat cross-product, appends
/// records and per-configuration means to the CSV, and prints a best-tile
/// summary per solver.
pub fn cmd_bench(flags: &BenchFlags) -> i32 {
    let kernel = match crate::kernels::KernelParams::new(flags.omega, [0.0, 0.0, flags.u_lid]) {
        Ok(k) => k,
        Err(e) => return usage_error(&e.to_string()),
    };
    // Validate the whole cross-product before the first allocation.
    for &solver in &flags.solvers {
        for &w in &flags.workers {
            for &tile in &flags.tiles {
                let params = RunParams {
                    steps: flags.steps,
                    tile,
                    workers: w,
                    kernel,
                };
                if let Err(e) = params.validate(solver, flags.spec) {
                    return usage_error(&format!("{solver} tile={tile} workers={w}: {e}"));
                }
            }
        }
    }

    // (solver, workers) -> best (tile, mean mflups)
    let mut best: Vec<((SolverKind, usize), (usize, f64))> = Vec::new();
    let config = CavityConfig::new(flags.spec, SolverKind::Oracle);

    for &solver in &flags.solvers {
        for &w in &flags.workers {
            for &tile in &flags.tiles {
                let params = RunParams {
                    steps: flags.steps,
                    tile,
                    workers: w,
                    kernel,
                };
                let mut records = Vec::with_capacity(flags.repeat);
                for rep in 0..flags.repeat {
                    let result = build_cavity(&config)
                        .and_then(|mut field| run(solver, &mut field, &params));
                    match result {
                        Ok(report) => records.push(BenchRecord {
                            solver,
                            spec: flags.spec,
                            tile,
                            workers: w,
                            steps: flags.steps,
                            seconds: report.seconds,
                            mflups: report.mflups,
                            rep: Rep::Index(rep),
                        }),
                        Err(e) => {
                            // Flush what this configuration measured so far.
                            if let Some(path) = &flags.csv {
                                let _ = append_bench_records(path, &records);
                            }
                            eprintln!("error: {solver} tile={tile} workers={w}: {e}");
                            return 1;
                        }
                    }
                }
                let mean_seconds =
                    records.iter().map(|r| r.seconds).sum::<f64>() / records.len() as f64;
                let mean_mflups =
                    records.iter().map(|r| r.mflups).sum::<f64>() / records.len() as f64;
                records.push(BenchRecord {
                    solver,
                    spec: flags.spec,
                    tile,
                    workers: w,
                    steps: flags.steps,
                    seconds: mean_seconds,
                    mflups: mean_mflups,
                    rep: Rep::Mean,
                });
                if let Some(path) = &flags.csv {
                    if let Err(e) = append_bench_records(path, &records) {
                        eprintln!("error: {e}");
                        return 1;
                    }
                }
                println!(
                    "{:<22} tile={:<4} workers={:<3} mean {:>9.3} MFLUPS over {} reps",
                    solver.name(),
                    tile,
                    w,
                    mean_mflups,
                    flags.repeat
                );
                let key = (solver, w);
                match best.iter_mut().find(|(k, _)| *k == key) {
                    Some((_, b)) if b.1 >= mean_mflups => {}
                    Some((_, b)) => *b = (tile, mean_mflups),
                    None => best.push((key, (tile, mean_mflups))),
                }
            }
        }
    }

    for ((solver, w), (tile, mflups)) in best {
        println!(
            "best tile for {:<22} workers={:<3} {} ({:.3} MFLUPS)",
            solver.name(),
            w,
            tile,
            mflups
        );
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(items: &[&str]) -> impl Iterator<Item = String> {
        items
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .into_iter()
    }

    #[test]
    fn run_flags_parse_with_defaults() {
        let flags = RunFlags::parse(strs(&[
            "--solver",
            "two-step-prism",
            "--dims",
            "8,9,10",
            "--steps",
            "4",
        ]))
        .unwrap();
        assert_eq!(flags.solver, SolverKind::TwoStepPrism);
        assert_eq!((flags.spec.lx, flags.spec.ly, flags.spec.lz), (8, 9, 10));
        assert_eq!(flags.steps, 4);
        assert_eq!(flags.omega, 1.0);
        assert_eq!(flags.u_lid, 0.05);
        assert_eq!(flags.tile, 8);
        assert_eq!(flags.workers, 1);
    }

    #[test]
    fn missing_flags_are_reported() {
        assert!(RunFlags::parse(strs(&["--dims", "8,8,8"])).is_err());
        assert!(RunFlags::parse(strs(&["--solver"])).is_err());
        assert!(RunFlags::parse(strs(&["--solver", "warp"])).is_err());
        assert!(RunFlags::parse(strs(&["--dims", "8,8"])).is_err());
        assert!(RunFlags::parse(strs(&["--frobnicate"])).is_err());
    }

    #[test]
    fn bench_flags_have_sweep_defaults() {
        let flags = BenchFlags::parse(strs(&["--dims", "16,16,16", "--steps", "4"])).unwrap();
        assert_eq!(flags.tiles, vec![8, 16, 32]);
        assert_eq!(flags.workers, vec![1]);
        assert_eq!(flags.repeat, 5);
        assert_eq!(flags.solvers.len(), 4);
    }

    #[test]
    fn list_flags_parse() {
        let flags = BenchFlags::parse(strs(&[
            "--dims",
            "16,16,16",
            "--steps",
            "4",
            "--solvers",
            "fuse,two-step-prism",
            "--tiles",
            "4, 8",
            "--workers",
            "1,2",
            "--repeat",
            "2",
        ]))
        .unwrap();
        assert_eq!(
            flags.solvers,
            vec![SolverKind::Fuse, SolverKind::TwoStepPrism]
        );
        assert_eq!(flags.tiles, vec![4, 8]);
        assert_eq!(flags.workers, vec![1, 2]);
    }

    #[test]
    fn odd_steps_for_a_two_step_solver_is_a_usage_error() {
        let flags = RunFlags::parse(strs(&[
            "--solver",
            "two-step-prism",
            "--dims",
            "8,8,8",
            "--steps",
            "7",
        ]))
        .unwrap();
        assert_eq!(cmd_run(&flags), 2);
    }

    #[test]
    fn bad_worker_split_is_a_usage_error() {
        let flags = RunFlags::parse(strs(&[
            "--solver",
            "two-step-prism-par",
            "--dims",
            "8,8,8",
            "--steps",
            "4",
            "--workers",
            "3",
        ]))
        .unwrap();
        assert_eq!(cmd_run(&flags), 2);
    }
}
