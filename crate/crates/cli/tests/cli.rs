use std::process::Command;

use sgsweep_cli::{dump_field, load_field, run_config, Args, FileConfig, RunConfig};
use sgsweep_core::{CartesianGrid, ScalarField};

fn sgsweep() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sgsweep"))
}

fn config(list: &[&str]) -> RunConfig {
    use clap::Parser;
    let args =
        Args::try_parse_from(std::iter::once("sgsweep").chain(list.iter().copied())).unwrap();
    RunConfig::merge(args, FileConfig::default()).unwrap()
}

#[test]
fn single_grid_study_prints_a_table() {
    let out = sgsweep()
        .args(["--example", "1", "--nh", "20", "--study", "2"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,L1,L1-order,Linf,Linf-order,CPU-seconds");
    assert!(lines[1].starts_with("20,") && lines[1].contains(",-,"));
    assert!(lines[2].starts_with("40,"));
    let order: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
    assert!(order > 2.0, "{order}");
}

#[test]
fn sparse_run_without_exact_solution_writes_field_and_timings() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("phi.txt");
    let timing = dir.path().join("timing.csv");
    let table = dir.path().join("table.csv");
    let out = sgsweep()
        .args([
            "--example",
            "6",
            "--case",
            "2d",
            "--mode",
            "sparse",
            "--nr",
            "8",
            "--nl",
            "2",
        ])
        .arg("--field-out")
        .arg(&field)
        .arg("--timing-out")
        .arg(&timing)
        .arg("--table-out")
        .arg(&table)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        std::fs::read_to_string(&table).unwrap().lines().next(),
        Some("N,CPU-seconds")
    );
    let loaded = load_field(&field).unwrap();
    assert_eq!(loaded.grid().cells(), &[32, 32]);
    let timings = std::fs::read_to_string(&timing).unwrap();
    assert!(timings.starts_with(
        "N,root,iterations,init,warm-start,sweeps,prolongation,combination,total\n32,8,"
    ));
}

#[test]
fn exit_codes_distinguish_failures() {
    let status = sgsweep().args(["--example", "9"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let status = sgsweep()
        .args(["--example", "2", "--nh", "16", "--max-iter", "2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
    let status = sgsweep()
        .args([
            "--example",
            "2",
            "--nh",
            "8",
            "--field-out",
            "/nonexistent-dir/phi.txt",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(4));
    let status = sgsweep()
        .args(["--config", "/nonexistent-dir/run.toml"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(4));
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "example = 5\ncase = \"2d\"\nnh = 400\n").unwrap();
    let out = sgsweep()
        .arg("--config")
        .arg(&path)
        .args(["--nh", "16"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("16,"));
}

#[test]
fn dump_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    let grid = CartesianGrid::new(&[-1.0, 0.5, 0.0], &[2.0, 1.0, 3.0], &[4, 5, 6]).unwrap();
    let field = ScalarField::sample(grid, |x| (x[0] * 1.7).sin() / 3.0 + x[1] * x[2] * 1e-9);
    dump_field(&field, &path).unwrap();
    let back = load_field(&path).unwrap();
    assert_eq!(back.values(), field.values());
    assert!(back.grid().same_points(field.grid()));
}

#[test]
fn replay_gives_identical_numbers() {
    let cfg = config(&[
        "--example",
        "4",
        "--mode",
        "sparse",
        "--nr",
        "8",
        "--nl",
        "2",
        "--workers",
        "2",
    ]);
    let a = run_config(&cfg).unwrap();
    let b = run_config(&cfg).unwrap();
    assert_eq!(a.field.values(), b.field.values());
    assert_eq!(a.rows[0].norms, b.rows[0].norms);
}

#[test]
fn shape_from_shading_dump_spans_the_contour_range() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ex4.txt");
    let mut cfg = config(&[
        "--example",
        "4",
        "--mode",
        "sparse",
        "--nr",
        "10",
        "--nl",
        "2",
    ]);
    cfg.field_out = Some(path.clone());
    run_config(&cfg).unwrap();
    let field = load_field(&path).unwrap();
    let lo = field.values().iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = field
        .values()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(lo >= -0.05 && hi <= 2.05 && hi > 1.5, "{lo} {hi}");
}
