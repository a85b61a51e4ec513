//! End-to-end checks of the binary: exit codes, header round trip, and
//! byte-level determinism.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_halfline"))
}

#[test]
fn classify_reports_the_critical_regime() {
    let out = bin().args(["classify", "--j", "0.5", "0.5", "0"]).output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &doc["data"][0];
    assert_eq!(row["j_plus"], serde_json::json!(0.5));
    assert_eq!(row["regime"], serde_json::json!("critical-no-potential"));
    assert_eq!(row["n_plus"], serde_json::json!(1));
    assert_eq!(doc["config"]["command"], serde_json::json!("classify"));
}

#[test]
fn constraint_violation_exits_2() {
    let out = bin().args(["classify", "--j", "0.5", "0.5", "0.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn regime_gate_exits_3() {
    // Robin beta with an essentially self-adjoint ordering: the beta
    // coordinate is meaningful only at |J+| = 1/2.
    let out = bin()
        .args(["evolve", "--j", "1", "-1", "1", "--bc", "beta=0.3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    // Propagation in the well regime is also a gate.
    let out = bin()
        .args(["evolve", "--j", "0", "1", "0", "--bc", "theta=0", "--grid-n", "64"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn converge_csv_is_deterministic_and_carries_the_config() {
    let args = [
        "--format", "csv", "converge", "--j", "0.5", "0", "0.5", "--bc", "theta=0", "--t", "0.5",
        "--n", "4,8,16", "--grid-n", "128", "--ymax", "12", "--psi0", "mode:0",
    ];
    let a = bin().args(args).output().unwrap();
    assert!(a.status.success(), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    let b = bin().args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout, "identical config must give byte-identical CSV");
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("# version = "));
    let cfg_line = text
        .lines()
        .find_map(|l| l.strip_prefix("# config = "))
        .expect("config header present");
    let cfg: serde_json::Value = serde_json::from_str(cfg_line).unwrap();
    assert_eq!(cfg["command"], serde_json::json!("converge"));
    assert_eq!(cfg["n_list"], serde_json::json!([4, 8, 16]));
    assert!(text.lines().any(|l| l.starts_with("n,l2_error,fitted_order")));
    // Three data rows follow the header.
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 3);
}

#[test]
fn config_file_keys_are_overridden_by_flags() {
    let dir = std::env::temp_dir().join("halfline_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.json");
    std::fs::write(&path, r#"{"j1": 1.0, "j2": -1.0, "j3": 1.0, "format": "json"}"#).unwrap();
    // File alone: |J+| = 2.
    let out = bin()
        .args(["--config", path.to_str().unwrap(), "classify"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["data"][0]["j_plus"], serde_json::json!(2.0));
    // Flag overrides the file.
    let out = bin()
        .args(["--config", path.to_str().unwrap(), "classify", "--j", "0.5", "0.5", "0"])
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["data"][0]["j_plus"], serde_json::json!(0.5));
}

#[test]
fn mc_emits_bins_with_errors() {
    let out = bin()
        .args([
            "mc", "--j", "0.5", "0.5", "0", "--bc", "dirichlet", "--t", "0.5", "--slices", "8",
            "--samples", "2000", "--seed", "7", "--y0", "1", "--bins", "0:4:8",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["data"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["std_error"].as_f64().unwrap() >= 0.0));
}

#[test]
fn spectrum_matches_exact_ladder() {
    let out = bin()
        .args([
            "spectrum", "--j", "0.5", "0.5", "0", "--bc", "dirichlet", "--solver", "fd",
            "--grid-n", "2000", "--n-max", "3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let e0 = doc["data"][0]["energy"].as_f64().unwrap();
    assert!((e0 - 3.0).abs() < 1e-3, "E0 = {e0}");
}
