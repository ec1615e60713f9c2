//! End-to-end checks of the `lbm-prism` binary: flag validation, exit codes,
//! and the artifacts each command writes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lbm-prism"))
}

fn run_with(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should launch")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("lbm-prism-cli-{}-{name}", std::process::id()));
    p
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn run_prints_timing_and_writes_artifacts() {
    let dump = tmp("field.dump");
    let norms = tmp("norms.log");
    let csv = tmp("run.csv");
    for p in [&dump, &norms, &csv] {
        std::fs::remove_file(p).ok();
    }

    let output = run_with(&[
        "run",
        "--solver",
        "two-step-prism",
        "--dims",
        "12,10,8",
        "--steps",
        "4",
        "--tile",
        "4",
        "--dump",
        dump.to_str().unwrap(),
        "--norms",
        norms.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("MFLUPS"), "stdout: {text}");
    assert!(text.contains("elapsed"), "stdout: {text}");

    // 24-byte header + 12*10*8 cells * 19 slots * 8 bytes.
    let dump_len = std::fs::metadata(&dump).unwrap().len();
    assert_eq!(dump_len, 24 + 12 * 10 * 8 * 19 * 8);
    let norm_lines = std::fs::read_to_string(&norms).unwrap().lines().count();
    assert_eq!(norm_lines, 12 * 10 * 8);
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("solver,lx,ly,lz,tile,workers,steps,seconds,mflups,rep"));

    for p in [&dump, &norms, &csv] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn odd_steps_for_two_step_solvers_exit_2() {
    let output = run_with(&[
        "run",
        "--solver",
        "two-step-prism",
        "--dims",
        "8,8,8",
        "--steps",
        "7",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr(&output).contains("even"),
        "stderr: {}",
        stderr(&output)
    );
}

#[test]
fn indivisible_worker_split_exits_2() {
    let output = run_with(&[
        "run",
        "--solver",
        "two-step-prism-par",
        "--dims",
        "8,8,8",
        "--steps",
        "4",
        "--workers",
        "3",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr(&output).contains("slab"),
        "stderr: {}",
        stderr(&output)
    );
}

#[test]
fn unknown_flags_exit_2() {
    let output = run_with(&["run", "--solver", "fuse", "--frobnicate"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run_with(&["transmogrify"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_passes_at_default_tolerance() {
    let output = run_with(&["verify", "--dims", "8,8,8", "--steps", "8", "--tile", "4"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    for kind in [
        "fuse",
        "fuse-prism",
        "two-step",
        "two-step-prism",
        "two-step-prism-par",
    ] {
        assert!(text.contains(kind), "missing row for {kind}: {text}");
    }
    // Deterministic: a second run prints the identical table.
    let again = run_with(&["verify", "--dims", "8,8,8", "--steps", "8", "--tile", "4"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn verify_with_parallel_workers_passes() {
    let output = run_with(&[
        "verify",
        "--dims",
        "12,6,7",
        "--steps",
        "8",
        "--tile",
        "4",
        "--workers",
        "2",
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
}

#[test]
fn verify_with_zero_tolerance_still_prints_the_table() {
    let output = run_with(&[
        "verify", "--dims", "6,6,6", "--steps", "4", "--tile", "2", "--tol", "0",
    ]);
    // Exit 1 only if any solver's rounding differs from the reference; the
    // table must be complete either way.
    assert!(matches!(output.status.code(), Some(0) | Some(1)));
    let text = stdout(&output);
    assert!(text.contains("two-step-prism"), "stdout: {text}");
}

#[test]
fn bench_writes_records_and_means() {
    let csv = tmp("bench.csv");
    std::fs::remove_file(&csv).ok();

    let args = [
        "bench",
        "--dims",
        "8,8,8",
        "--steps",
        "2",
        "--solvers",
        "fuse,two-step-prism",
        "--tiles",
        "2,4",
        "--repeat",
        "2",
        "--csv",
        csv.to_str().unwrap(),
    ];
    let output = run_with(&args);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("best tile for fuse"), "stdout: {text}");
    assert!(
        text.contains("best tile for two-step-prism"),
        "stdout: {text}"
    );

    let csv_text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = csv_text.lines().collect();
    // Header + 2 solvers x 2 tiles x (2 records + 1 mean).
    assert_eq!(lines.len(), 1 + 2 * 2 * 3, "csv: {csv_text}");
    assert_eq!(
        lines[0],
        "solver,lx,ly,lz,tile,workers,steps,seconds,mflups,rep"
    );
    assert_eq!(csv_text.matches(",mean").count(), 4);

    // Appending keeps a single header.
    let output = run_with(&args);
    assert_eq!(output.status.code(), Some(0));
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(csv_text.lines().count(), 1 + 2 * (2 * 2 * 3));
    assert_eq!(csv_text.matches("solver,lx").count(), 1);

    std::fs::remove_file(&csv).ok();
}

#[test]
fn help_exits_zero() {
    let output = run_with(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("usage"));
}
