//! End-to-end tests of the `edc` binary.

use std::path::Path;
use std::process::{Command, Output};

fn edc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_tiny_config(dir: &Path) -> std::path::PathBuf {
    let out = dir.join("out");
    let cfg = serde_json::json!({
        "function": {
            "family": "sphere",
            "dimension": 5,
            "shifted": true,
            "rotation": "none",
            "seed": 3
        },
        "algorithm": "edc",
        "edc": {
            "population_size": 20,
            "subproblem_size": 2,
            "pool_generations": 3,
            "max_fes": 1000
        },
        "runs": 2,
        "base_seed": 100,
        "output_dir": out
    });
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    path
}

#[test]
fn gen_config_emits_standard_parameters() {
    let out = edc(&["gen-config"]);
    assert!(out.status.success());
    let cfg: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cfg["edc"]["population_size"], 1000);
    assert_eq!(cfg["edc"]["selection_ratio"], 0.5);
    assert_eq!(cfg["edc"]["pool_generations"], 20);
    assert_eq!(cfg["edc"]["subproblem_size"], 30);
    assert_eq!(cfg["edc"]["eta_forward"], 2.0);
    assert_eq!(cfg["edc"]["eta_backward"], 0.5);
    assert_eq!(cfg["edc"]["max_fes"], 1_000_000);
    assert_eq!(cfg["runs"], 25);
}

#[test]
fn run_writes_traces_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = write_tiny_config(dir.path());
    let out = edc(&["run", cfg_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("sphere_d5 edc"), "unexpected output: {text}");

    let results = dir.path().join("out");
    for seed in [100, 101] {
        assert!(results.join(format!("sphere_d5_edc_seed{seed}.csv")).exists());
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(results.join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["runs"], 2);
    assert_eq!(summary["per_run_fev"].as_array().unwrap().len(), 2);
}

#[test]
fn compare_summary_with_itself_reports_no_difference() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = write_tiny_config(dir.path());
    // The rank-sum test needs at least three observations per side.
    assert!(edc(&["run", cfg_path.to_str().unwrap(), "--runs", "3"])
        .status
        .success());
    let summary = dir.path().join("out").join("summary.json");
    let s = summary.to_str().unwrap();
    let out = edc(&["compare", s, s]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("verdict ≈"), "unexpected output: {text}");
}

#[test]
fn trace_round_trips_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = write_tiny_config(dir.path());
    assert!(edc(&["run", cfg_path.to_str().unwrap()]).status.success());
    let trace = dir.path().join("out").join("sphere_d5_edc_seed100.csv");
    let original = std::fs::read_to_string(&trace).unwrap();

    let copy = dir.path().join("copy.csv");
    let out = edc(&[
        "trace",
        trace.to_str().unwrap(),
        "--output",
        copy.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(copy).unwrap(), original);
}

#[test]
fn run_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = write_tiny_config(dir.path());
    let alt = dir.path().join("alt");
    let out = edc(&[
        "run",
        cfg_path.to_str().unwrap(),
        "--runs",
        "1",
        "--seed",
        "7",
        "--algorithm",
        "gsmgeda",
        "--output",
        alt.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(alt.join("sphere_d5_gsmgeda_seed7.csv").exists());
}

#[test]
fn malformed_config_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = edc(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_trace_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "fe_count,best_fev\n10,1.0\n5,0.5\n").unwrap();
    let out = edc(&["trace", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_with_code_3() {
    let out = edc(&["run", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(3));
}
