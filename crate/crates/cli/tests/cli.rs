// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fockgate(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockgate"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn ideal_gate_matches_closed_form() {
    let tmp = TempDir::new().unwrap();
    let out = fockgate(tmp.path(), &["gate", "--model", "ideal", "--set", "gate.phi=0.7853981633974483"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let records = json(&tmp.path().join("gate.json"));
    let rec = &records[0];
    assert_eq!(rec["model"], "ideal");
    assert!(rec["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert!(rec["fidelity"].as_f64().unwrap() <= 1.0 + 1e-9);
    assert!(rec["leakage"].as_f64().unwrap() < 1e-12);
}

#[test]
fn zero_duration_gate_is_a_spin_flip() {
    let tmp = TempDir::new().unwrap();
    let out = fockgate(tmp.path(), &["gate", "--set", "gate.tau=0", "--set", "models=[\"ideal\",\"effective\"]"]);
    assert_eq!(out.status.code(), Some(0));
    for rec in json(&tmp.path().join("gate.json")).as_array().unwrap() {
        assert!(rec["fidelity"].as_f64().unwrap() > 1.0 - 1e-12, "{rec}");
        assert!(rec["leakage"].as_f64().unwrap() < 1e-15);
    }
}

#[test]
fn cutoff_without_guard_levels_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let out = fockgate(tmp.path(), &["gate", "--set", "gate.m=3", "--set", "space.fock_cutoff=4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("space.fock_cutoff"));
    assert!(!tmp.path().join("gate.json").exists());
}

#[test]
fn config_file_is_read_and_bad_fields_are_named() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("run.json");
    std::fs::write(&cfg, r#"{"physics": {"delta": 40.0}, "models": ["ideal"]}"#).unwrap();
    let out = fockgate(tmp.path(), &["gate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    std::fs::write(&cfg, r#"{"physics": {"delta": "wide"}}"#).unwrap();
    let out = fockgate(tmp.path(), &["gate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("physics.delta"));
}

#[test]
fn sweep_writes_ordered_csv() {
    let tmp = TempDir::new().unwrap();
    let out = fockgate(tmp.path(), &["sweep", "--model", "effective"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(tmp.path().join("sweep.csv")).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["r", "model", "fidelity", "leakage", "gate_time"]
    );
    let rows: Vec<(f64, f64, f64)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[2].parse().unwrap(), r[4].parse().unwrap())
        })
        .collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r.0).collect();
    assert_eq!(ratios, [0.02, 0.05, 0.1, 0.2, 0.5]);
    for w in rows.windows(2) {
        assert!(w[1].1 <= w[0].1 + 1e-6, "fidelity rises between r={} and r={}", w[0].0, w[1].0);
        // τ ∝ 1/|Ω_L| at fixed φ
        assert!((w[1].2 * w[1].0 - w[0].2 * w[0].0).abs() < 1e-9 * w[0].2 * w[0].0);
    }
}

#[test]
fn sweep_is_reproducible() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    fockgate(a.path(), &["sweep", "--set", "sweep.ratios=[0.05,0.1]"]);
    fockgate(b.path(), &["sweep", "--set", "sweep.ratios=[0.05,0.1]"]);
    let read = |d: &TempDir| std::fs::read(d.path().join("sweep.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn empty_sweep_grid_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let out = fockgate(tmp.path(), &["sweep", "--set", "sweep.ratios=[]"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn synthesize_writes_plan_and_report() {
    let tmp = TempDir::new().unwrap();
    let out = fockgate(tmp.path(), &["synthesize", "--model", "ideal"]);
    assert_eq!(out.status.code(), Some(0));
    let plan = fockgate::CircuitPlan::from_json(&std::fs::read_to_string(tmp.path().join("plan.json")).unwrap()).unwrap();
    assert_eq!(plan.len(), 3);
    let report = json(&tmp.path().join("synthesis.json"));
    assert!(report[0]["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
}

#[test]
fn vacuum_target_gives_empty_plan() {
    let tmp = TempDir::new().unwrap();
    let out = fockgate(tmp.path(), &["synthesize", "--set", r#"synthesize.target={"kind":"fock","n":0}"#]);
    assert_eq!(out.status.code(), Some(0));
    let plan = json(&tmp.path().join("plan.json"));
    assert_eq!(plan["steps"].as_array().unwrap().len(), 0);
    for rec in json(&tmp.path().join("synthesis.json")).as_array().unwrap() {
        assert!((rec["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn target_reaching_guard_levels_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let out = fockgate(
        tmp.path(),
        &["synthesize", "--set", "space.fock_cutoff=8", "--set", r#"synthesize.target={"kind":"equal","levels":[0,7]}"#],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let out = fockgate(tmp.path(), &["validate", "--set", "space.fock_cutoff=8", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let out = fockgate(tmp.path(), &["validate", "--set", "space.fock_cutoff=8", "--set", "validate.corrupt_theta0=true"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&tmp.path().join("validate.json"));
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].contains("closed-form"));

    let out = fockgate(tmp.path(), &["validate", "--set", "space.fock_cutoff=8", "--set", "tolerances.fidelity=1e-30"]);
    assert_eq!(out.status.code(), Some(1));
}
