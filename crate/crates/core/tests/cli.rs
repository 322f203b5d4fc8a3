use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use gdrazin::Matrix;

fn gdrazin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdrazin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn matrix_file(dir: &TempDir, name: &str, m: &Matrix) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, m.to_json()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_stdout(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn matrix(v: &Value) -> Matrix {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn compute_examples() {
    let dir = TempDir::new().unwrap();
    let n = matrix_file(&dir, "n.json", &Matrix::from_int_rows(&[[0, 1], [0, 0]]));
    let v = json_stdout(&gdrazin(&["compute", "--input", s(&n)]));
    assert!(matrix(&v["a_d"]).is_zero());
    assert_eq!(v["index"], 2);

    let d = matrix_file(&dir, "d.json", &Matrix::diag_ints(&[2, 3]));
    let out_path = dir.path().join("out.json");
    let out = gdrazin(&["compute", "--input", s(&d), "--output", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(matrix(&v["a_d"]), Matrix::from_literals(&[["1/2", "0"], ["0", "1/3"]]));
    assert_eq!(v["index"], 0);
}

#[test]
fn compute_rejects_bad_files() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"rows":2,"cols":2,"entries":[["1//2","0"],["0","0"]]}"#).unwrap();
    let out = gdrazin(&["compute", "--input", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("(0,0)") && err.contains("position 2"), "{err}");
    assert!(out.stdout.is_empty());

    std::fs::write(&bad, r#"{"rows":2,"cols":2,"entries":[["1","0"]]}"#).unwrap();
    assert_eq!(gdrazin(&["compute", "--input", s(&bad)]).status.code(), Some(1));
    assert_eq!(gdrazin(&["compute"]).status.code(), Some(1));
}

#[test]
fn decompose_examples() {
    let dir = TempDir::new().unwrap();
    let d = matrix_file(&dir, "d.json", &Matrix::diag_ints(&[2, 0]));

    let v = json_stdout(&gdrazin(&["decompose", "--form", "euw", "--input", s(&d)]));
    assert_eq!(matrix(&v["e"]), Matrix::diag_ints(&[1, 0]));
    assert_eq!(matrix(&v["u"]), Matrix::diag_ints(&[2, 1]));
    assert!(matrix(&v["w"]).is_zero());
    assert!(v["certificates"].as_object().unwrap().values().all(|b| b == true));

    let v = json_stdout(&gdrazin(&["decompose", "--form", "splitting", "--input", s(&d)]));
    assert_eq!(v["basis_p"], serde_json::json!([["1", "0"]]));
    assert_eq!(v["basis_q"], serde_json::json!([["0", "1"]]));
    assert_eq!(matrix(&v["restriction_p"]), Matrix::diag_ints(&[2]));

    let z = matrix_file(&dir, "z.json", &Matrix::zero(2));
    let v = json_stdout(&gdrazin(&["decompose", "--form", "two-units", "--input", s(&z)]));
    assert_eq!(matrix(&v["u1"]), Matrix::diag_ints(&[-1, -1]));
    assert_eq!(matrix(&v["u2"]), Matrix::identity(2));

    for form in ["quasipolar", "corner", "scaler"] {
        let v = json_stdout(&gdrazin(&["decompose", "--form", form, "--input", s(&d)]));
        assert!(v["certificates"].as_object().unwrap().values().all(|b| b == true), "{form}");
    }
    assert_eq!(gdrazin(&["decompose", "--form", "polar", "--input", s(&d)]).status.code(), Some(1));
}

#[test]
fn verify_examples() {
    let v = json_stdout(&gdrazin(&["verify", "--theorem", "lem3.1", "--size", "3", "--trials", "50", "--seed", "7"]));
    assert_eq!(v["passes"], 50);
    assert_eq!(v["failures"], serde_json::json!([]));

    let out = gdrazin(&["verify", "--theorem", "thm3.3", "--size", "2", "--trials", "100", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));

    let out = gdrazin(&["verify", "--theorem", "thm9.9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lem2.1"));
    assert_eq!(gdrazin(&["verify", "--theorem", "cline", "--size", "0"]).status.code(), Some(1));
}

#[test]
fn a_single_trial_replays_from_its_seed() {
    let v = json_stdout(&gdrazin(&["verify", "--theorem", "thm3.6", "--size", "3", "--trial-seed", "12345"]));
    assert_eq!(v["trials"], 1);
    assert_eq!(v["passes"], 1);
}

#[test]
fn failing_instance_exits_2_with_a_replayable_dump() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("inst.json");
    std::fs::write(
        &inst,
        r#"{"a":{"rows":1,"cols":1,"entries":[["2"]]},"b":{"rows":1,"cols":1,"entries":[["1"]]},"c":{"rows":1,"cols":1,"entries":[["1"]]}}"#,
    )
    .unwrap();
    // a = 2 is not idempotent, so the chain refuses the instance.
    let out = gdrazin(&["verify", "--theorem", "thm3.3", "--instance", s(&inst)]);
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failure = &report["failures"][0];
    assert!(failure["failed_certificate"].as_str().unwrap().contains("a^2 = a"));

    let dump = dir.path().join("dump.json");
    std::fs::write(&dump, failure["instance"].to_string()).unwrap();
    let again = gdrazin(&["verify", "--theorem", "thm3.3", "--instance", s(&dump)]);
    assert_eq!(again.status.code(), Some(2));
    let again: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(again["failures"][0]["failed_certificate"], failure["failed_certificate"]);
}

#[test]
fn fuzz_documented_run() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let out = gdrazin(&["fuzz", "--trials", "100", "--seed", "42", "--sizes", "2,4,6", "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 18);
    for r in reports {
        assert_eq!(r["passes"], 100, "{}", r["theorem_id"]);
    }
}

#[test]
fn fuzz_rejects_unwritable_report_and_bad_sizes() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("missing").join("report.json");
    assert_eq!(gdrazin(&["fuzz", "--trials", "1", "--report", s(&report)]).status.code(), Some(1));
    assert_eq!(gdrazin(&["fuzz", "--trials", "1", "--sizes", "2,x"]).status.code(), Some(1));
    assert_eq!(gdrazin(&["fuzz", "--trials", "0"]).status.code(), Some(1));
}
