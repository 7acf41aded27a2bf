use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use biped_gait::engine::WalkTrace;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_biped-gait"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn simulate_flat_reports_the_stride() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flat");
    let o = run(&["simulate", "--config", config("flat_walk.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("T = 0.8407 s"), "{text}");
    assert!(text.contains("length 0.6840 m"), "{text}");
    for f in ["trace.csv", "trace.json", "summary.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn low_energy_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("low.json");
    std::fs::write(&cfg, r#"{"gait":{"energy":700}}"#).unwrap();
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("784"));
}

#[test]
fn malformed_config_exits_with_2_and_missing_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(run(&["validate", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["validate", "--config", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn sine_terrain_walk_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sine");
    let o = run(&["simulate", "--config", config("sine_walk.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let trace = WalkTrace::from_json(&std::fs::read_to_string(out.join("trace.json")).unwrap()).unwrap();
    assert_eq!(trace.strides.len(), 6);
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let again = serde_json::to_value(trace.summary()).unwrap();
    assert_eq!(summary, again);
    let csv = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6 * 256);
}

#[test]
fn tent_walk_warns_but_completes_and_strict_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("tent_walk.json");
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("a").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let o = run(&["simulate", "--strict", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("b").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn steep_surface_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "simulate",
        "--surface",
        r#"{"type":"pwl","k":1.5}"#,
        "--out",
        dir.path().join("s").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn validate_exit_codes() {
    let sine = config("sine_walk.json");
    let o = run(&["validate", "--config", sine.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("d_sr = 0.060000"), "{text}");
    assert!(text.contains("max |f'| = 0.120000"), "{text}");
    let o = run(&["validate", "--config", sine.to_str().unwrap(), "--surface", r#"{"type":"sin","d":0.2,"omega":4}"#]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(run(&["validate"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let surf = dir.path().join("flat.json");
    std::fs::write(&surf, r#"{"type":"flat"}"#).unwrap();
    assert_eq!(run(&["validate", "--surface", surf.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn sweeps_write_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ep");
    let o = run(&["sweep", "--config", config("sweep_ep_vs_beta.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("ep_vs_beta.csv")).unwrap();
    assert!(csv.lines().next().unwrap().ends_with(",branch"));
    assert!(out.join("ep_vs_beta.json").exists());

    let out = dir.path().join("cl");
    let o = run(&["sweep", "--config", config("sweep_clearance.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("clearance.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 61);

    let out = dir.path().join("v");
    let o = run(&["sweep", "--config", config("sweep_speed_vs_beta.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(out.join("speed_vs_beta.csv")).unwrap();
    let v: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap())
        .filter(|r| &r[0] == "900")
        .map(|r| r[3].parse().unwrap())
        .collect();
    let peak = v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert!(peak > 0 && peak < v.len() - 1);
    assert!(v[..=peak].windows(2).all(|w| w[1] > w[0]));
    assert!(v[peak..].windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn sweep_without_spec_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sweep", "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("sweep_time_vs_e0.json");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        assert_eq!(run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(), Some(0));
    }
    assert_eq!(
        std::fs::read(a.join("time_speed_vs_e0.csv")).unwrap(),
        std::fs::read(b.join("time_speed_vs_e0.csv")).unwrap()
    );
}

#[test]
fn optimize_flags_the_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["optimize", "--energy", "1000,1200", "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(!lines[0].contains("boundary"));
    assert!(lines[1].contains("boundary"));
    assert_eq!(run(&["optimize", "--energy", "700"]).status.code(), Some(2));
}

#[test]
fn output_directory_is_not_clobbered() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w");
    let args = ["walk", "--strides", "2", "--out", out.to_str().unwrap()];
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(run(&args).status.code(), Some(1));
    let mut with = args.to_vec();
    with.push("--overwrite");
    with.push("--reverse");
    assert_eq!(run(&with).status.code(), Some(0));
    assert!(out.join("trace_reversed.csv").exists());
}
