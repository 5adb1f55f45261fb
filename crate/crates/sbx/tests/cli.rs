use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn sbx(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbx"))
        .args(args)
        .current_dir(dir)
        .env_remove("SBX_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    fs::write(dir.join(name), body).unwrap();
    name.to_string()
}

/// Everything except the timestamp line.
fn stable(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with("# timestamp:")).collect::<Vec<_>>().join("\n")
}

const ENERGY_SWEEP: &str = r#"{
  "task": "energy_scan",
  "kind": "rwa",
  "alpha": { "start": 0.01, "stop": 0.05, "count": 9 },
  "s": [0.5, 0.7],
  "delta": 0.02,
  "output": { "path": "energy.csv" }
}"#;

#[test]
fn run_is_deterministic_apart_from_timestamp() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", ENERGY_SWEEP);
    assert!(sbx(dir.path(), &["run", &cfg]).status.success());
    let first = fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    assert!(sbx(dir.path(), &["run", &cfg]).status.success());
    let second = fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    assert_eq!(stable(&first), stable(&second));
    assert!(first.contains("# config_sha256: "));
    assert!(first.contains("# delta: [0.02]"));
    assert!(first.contains("# s: [0.5, 0.7]"));
    let header = first.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.split(',').all(|c| c.ends_with(']')), "{header}");
    assert_eq!(first.lines().filter(|l| !l.starts_with('#')).count(), 1 + 18);
}

#[test]
fn sweep_rows_do_not_depend_on_worker_count() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", ENERGY_SWEEP);
    assert!(sbx(dir.path(), &["sweep", &cfg, "--workers", "1"]).status.success());
    let serial = fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    assert!(sbx(dir.path(), &["sweep", &cfg, "--workers", "8"]).status.success());
    let parallel = fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    assert_eq!(stable(&serial), stable(&parallel));
}

#[test]
fn critical_line_matches_closed_form() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"task": "critical_line", "s": {"start": 0.1, "stop": 1.0, "count": 10}, "delta": 0.02,
            "output": {"path": "line.json", "format": "json"}}"#,
    );
    assert!(sbx(dir.path(), &["run", &cfg]).status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("line.json")).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for r in rows {
        let s = r[0].as_f64().unwrap();
        let ac = r[2].as_f64().unwrap();
        assert!((ac - 0.04 * s).abs() <= 1e-6 * ac, "{s}: {ac}");
    }
}

#[test]
fn config_errors_exit_1_with_location() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", "{\n  \"task\": \"bound_state\",\n  \"alpah\": 0.1\n}");
    let out = sbx(dir.path(), &["run", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");

    let cfg = write_config(dir.path(), "d.json", r#"{"task": "dynamics", "alpha": 0.01, "s": 0.7, "delta": 0.02, "dt": 0.5}"#);
    let out = sbx(dir.path(), &["run", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dt"));

    let out = sbx(dir.path(), &["run", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
}

const LOCALIZED: &str = r#"{"task": "bound_state", "kind": "polaron", "alpha": [0.05, 2.0], "s": 0.7, "delta": 0.02,
    "output": {"path": "bound.csv"}}"#;

#[test]
fn numeric_failure_aborts_run_but_not_sweep() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", LOCALIZED);
    let out = sbx(dir.path(), &["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha=2"));

    let out = sbx(dir.path(), &["sweep", &cfg, "--workers", "2"]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("bound.csv")).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].ends_with(",ok"));
    assert!(rows[1].contains("error: "), "{}", rows[1]);
    assert!(text.contains("# failed_cells: 1"));
}

#[test]
fn out_dir_variable_redirects_output() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("results");
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"task": "boundary", "s": 1.0, "delta": 0.1, "output": {"path": "nested/b.csv"}}"#,
    );
    let out = Command::new(env!("CARGO_BIN_EXE_sbx"))
        .args(["run", &cfg])
        .current_dir(dir.path())
        .env("SBX_OUT_DIR", &target)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(target.join("b.csv").exists());
    assert!(!dir.path().join("nested").exists());
}

#[test]
fn oversized_grid_is_refused_with_cell_count() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"task": "bound_state", "alpha": {"start": 0.0, "stop": 0.1, "count": 2000},
            "s": {"start": 0.1, "stop": 1.0, "count": 1000}, "delta": 0.02}"#,
    );
    let out = sbx(dir.path(), &["sweep", &cfg, "--workers", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2000000 cells"));
}

#[test]
fn verify_filter_and_sensitivity() {
    let dir = TempDir::new().unwrap();
    let out = sbx(dir.path(), &["verify", "--only=solver_order"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).all(|l| l.contains("[solver_order]")));

    let out = sbx(dir.path(), &["verify", "--only=solver_order", "--order-dt", "0.5"]);
    assert_eq!(out.status.code(), Some(3));

    let out = sbx(dir.path(), &["verify", "--only=nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}
