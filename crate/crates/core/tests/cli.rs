//! The `masckit` binary end to end: exit codes, output formats, determinism.

use std::path::Path;
use std::process::{Command, Output};

fn masckit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_masckit"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn recover_reports_json() {
    let o = masckit(&["recover", "--matrix", "data/alternating_row.txt", "--signal", "data/signal_e1.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["recovered"], true);
    assert_eq!(v["x"].as_array().unwrap().len(), 3);
}

#[test]
fn rate_prints_one_csv_row() {
    let o = masckit(&["rate", "--matrix", "data/triangle_incidence.txt", "--sparsity", "1", "--trials", "20", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,trials,successes,rate");
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[..2], ["1", "20"]);
    let successes: u64 = fields[2].parse().unwrap();
    let rate: f64 = fields[3].parse().unwrap();
    assert!((rate - successes as f64 / 20.0).abs() < 1e-12);
    // same seed, same row
    assert_eq!(stdout(&masckit(&["rate", "--matrix", "data/triangle_incidence.txt", "--sparsity", "1", "--trials", "20", "--seed", "3"])), text);
}

#[test]
fn masc_check_verdicts() {
    let out = masckit(&["masc", "check", "--matrix", "data/ones_row.txt", "--support", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "out");
    let g = masckit(&["graph", "masc-check", "data/two_loops.graph", "--support", "0,4"]);
    assert_eq!(g.status.code(), Some(0));
    assert_eq!(json(&g)["verdict"], "in");
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(masckit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(masckit(&["dft", "mrsl", "--n", "10", "--mbar", "2"]).status.code(), Some(2));
    assert_eq!(masckit(&["masc", "check", "--matrix", "data/no_such_file.txt", "--support", "0"]).status.code(), Some(2));
    assert_eq!(masckit(&["masc", "check", "--matrix", "data/ones_row.txt", "--support", "7"]).status.code(), Some(2));
}

#[test]
fn budget_errors_exit_3() {
    let o = masckit(&["dft", "mrsl", "--n", "1009", "--mbar", "253", "--exact"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn strict_boundary_exits_4() {
    let o = masckit(&["dft", "masc-check", "--n", "5", "--omega", "0", "--support", "1", "--strict"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(json(&o)["verdict"], "boundary");
    let lax = masckit(&["dft", "masc-check", "--n", "5", "--omega", "0", "--support", "1"]);
    assert_eq!(lax.status.code(), Some(0));
    let decided = masckit(&["dft", "masc-check", "--n", "5", "--mbar", "1", "--support", "0", "--strict"]);
    assert_eq!(decided.status.code(), Some(0));
    assert_eq!(json(&decided)["verdict"], "in");
}

fn write_custom_config(dir: &Path) -> std::path::PathBuf {
    std::fs::write(dir.join("tri.txt"), "3 3\n-1 0 1\n1 -1 0\n0 1 -1\n").unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(
        &cfg,
        r#"{"kind": "custom", "parameters": {"matrix_file": "tri.txt", "trials": 50, "seed": 9}, "output": "out.csv"}"#,
    )
    .unwrap();
    cfg
}

#[test]
fn experiment_csv_is_byte_identical_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_custom_config(dir.path());
    let cfg = cfg.to_str().unwrap();
    assert_eq!(masckit(&["experiment", "--config", cfg]).status.code(), Some(0));
    let first = std::fs::read(dir.path().join("out.csv")).unwrap();
    assert_eq!(masckit(&["experiment", "--config", cfg]).status.code(), Some(0));
    let second = std::fs::read(dir.path().join("out.csv")).unwrap();
    assert_eq!(first, second);
    let text = String::from_utf8(first).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# config-sha256: ")));
    assert!(text.lines().any(|l| l == "s,trials,successes,rate,seed"));
}

#[test]
fn experiment_svg_is_emitted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_custom_config(dir.path());
    let o = masckit(&["experiment", "--config", cfg.to_str().unwrap(), "--svg"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(dir.path().join("out.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn bad_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"kind": "fig5-dft-recovery", "parameters": {"sead": 1}}"#).unwrap();
    assert_eq!(masckit(&["experiment", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}
