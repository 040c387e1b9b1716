use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(dir: &Path, command: &str, config: &str, extra: &[&str]) -> Output {
    let path = dir.join("config.json");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_miura"))
        .arg(command)
        .arg("--config")
        .arg(&path)
        .args(extra)
        .env("MIURA_LOG_LEVEL", "error")
        .output()
        .unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn config(command: &str, out: &Path, parameters: &str) -> String {
    format!(
        r#"{{"command": "{command}", "seed": 11, "output_dir": {}, "parameters": {parameters}}}"#,
        serde_json::to_string(out.to_str().unwrap()).unwrap()
    )
}

fn cases(report: &Value) -> &Vec<Value> {
    report["cases"].as_array().unwrap()
}

#[test]
fn lemma1_zero_generator_single_passing_case() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let params = r#"{"generators": [{"label": "zero", "dim": 2, "re": [[0, 0], [0, 0]]}]}"#;
    let result = run(tmp.path(), "lemma1", &config("lemma1", &out, params), &[]);
    assert_eq!(result.status.code(), Some(0), "{}", String::from_utf8_lossy(&result.stderr));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "lemma1");
    let cases = cases(&r);
    assert_eq!(cases.len(), 1);
    assert_eq!(cases[0]["residual"].as_f64(), Some(0.0));
    assert_eq!(cases[0]["pass"], true);
    assert_eq!(r["config_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn abstract_miura_scalar_four_passes_both_orders() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let params = r#"{"generators": [{"label": "four", "dim": 1, "re": [[4]]}]}"#;
    let result = run(tmp.path(), "abstract-miura", &config("abstract-miura", &out, params), &[]);
    assert_eq!(result.status.code(), Some(0));
    let r = report(&out);
    let names: Vec<&str> = cases(&r).iter().map(|c| c["name"].as_str().unwrap()).collect();
    for order in ["U_first", "V_first"] {
        assert!(names.contains(&format!("four/{order}/product").as_str()));
    }
    for c in cases(&r) {
        assert!(c["residual"].as_f64().unwrap() <= 1e-12, "{c}");
    }
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn soliton_zero_data_has_zero_residuals() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    for equation in ["KdV", "mKdV"] {
        let params = format!(
            r#"{{"equation": "{equation}", "initial": {{"kind": "zero"}}, "n_points": 64, "length": 20,
                "dt": 0.001, "t_end": 0.01, "snapshot_every": 2}}"#
        );
        let result = run(tmp.path(), "soliton", &config("soliton", &out, &params), &[]);
        assert_eq!(result.status.code(), Some(0));
        let r = report(&out);
        assert!(cases(&r).len() >= 3);
        for c in cases(&r) {
            assert_eq!(c["residual"].as_f64(), Some(0.0), "{c}");
        }
        let csv = fs::read_to_string(out.join("snapshots.csv")).unwrap();
        assert_eq!(csv.lines().filter(|l| l.starts_with("# t=")).count(), 6);
        assert!(out.join("manifest.json").exists());
    }
}

#[test]
fn reports_are_deterministic_modulo_wall_time() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let params = r#"{"instances": 5, "max_dim": 4}"#;
    let mut payloads = Vec::new();
    for _ in 0..2 {
        let result = run(tmp.path(), "factorize", &config("factorize", &out, params), &[]);
        assert_eq!(result.status.code(), Some(0));
        let mut r = report(&out);
        r["wall_time_s"] = Value::Null;
        payloads.push(serde_json::to_string(&r).unwrap());
    }
    assert_eq!(payloads[0], payloads[1]);

    let other = tmp.path().join("other");
    let reseeded = run(
        tmp.path(),
        "factorize",
        &config("factorize", &out, params),
        &["--seed", "12", "--out", other.to_str().unwrap()],
    );
    assert_eq!(reseeded.status.code(), Some(0));
    let mut r = report(&other);
    r["wall_time_s"] = Value::Null;
    assert_ne!(serde_json::to_string(&r).unwrap(), payloads[0]);
}

#[test]
fn failed_case_exits_one() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let params = r#"{"instances": 3, "max_dim": 4, "tolerance": 0.0}"#;
    let result = run(tmp.path(), "lemma1", &config("lemma1", &out, params), &[]);
    assert_eq!(result.status.code(), Some(1));
    let r = report(&out);
    assert!(cases(&r).iter().any(|c| c["pass"] == false));
}

#[test]
fn config_errors_exit_two() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let bad = [
        ("lemma1", config("lemma1", &out, r#"{"unknown_key": 1}"#)),
        ("lemma1", r#"{"command": "lemma1", "seed": 1}"#.to_string()),
        ("lemma1", "not json".to_string()),
        ("soliton", config("lemma1", &out, "{}")),
        ("lemma1", config("lemma1", &out, r#"{"generators": [{"dim": 2, "re": [[1]]}]}"#)),
    ];
    for (command, text) in bad {
        let result = run(tmp.path(), command, &text, &[]);
        assert_eq!(result.status.code(), Some(2), "{text}");
    }
    let missing = Command::new(env!("CARGO_BIN_EXE_miura"))
        .args(["lemma1", "--config", "/nonexistent/config.json"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn compute_errors_exit_three() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    // a negative eigenvalue has no principal square root
    let params = r#"{"generators": [{"dim": 1, "re": [[-1]]}]}"#;
    let result = run(tmp.path(), "abstract-miura", &config("abstract-miura", &out, params), &[]);
    assert_eq!(result.status.code(), Some(3));
    // time step far above the stability guard
    let params = r#"{"initial": {"kind": "kdv_soliton", "c": 4, "x0": 0}, "n_points": 512, "length": 40,
                     "dt": 0.1, "t_end": 1.0, "snapshot_every": 10}"#;
    let result = run(tmp.path(), "soliton", &config("soliton", &out, params), &[]);
    assert_eq!(result.status.code(), Some(3));
}

#[test]
fn transform_chain_and_matfun_defaults_pass() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let result = run(tmp.path(), "transform-chain", &config("transform-chain", &out, r#"{"fields": 3}"#), &[]);
    assert_eq!(result.status.code(), Some(0));
    let params = r#"{"instances": 4, "roundtrip_instances": 4}"#;
    let result = run(tmp.path(), "matfun-check", &config("matfun-check", &out, params), &[]);
    assert_eq!(result.status.code(), Some(0));
    assert_eq!(cases(&report(&out)).len(), 8);
}
