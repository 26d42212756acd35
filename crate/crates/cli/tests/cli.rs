use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn slk(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slk")).args(args).env("SLK_CACHE_DIR", cache).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn classical_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = slk(&["verify", "classical", "--tmax", "500"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["identity"], "classical");
    assert_eq!(v["status"], "Verified");
    assert_eq!(v["first_failure"], Value::Null);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        [
            "identity",
            "params",
            "status",
            "combination",
            "first_failure",
            "truncation",
            "elapsed_ms",
            "normalization_notes"
        ]
    );
    // the Hurwitz table lands in the cache directory
    assert!(dir.path().join("hurwitz-2000.txt").exists());
}

#[test]
fn mertens_j1_is_zero_combination() {
    let dir = tempfile::tempdir().unwrap();
    let out = slk(&["verify", "mertens", "--j", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let comb = v["combination"].as_array().unwrap();
    assert!(!comb.is_empty());
    assert!(comb.iter().all(|c| c[0] == 0));
    assert_eq!(v["params"]["identically_zero"], true);
}

#[test]
fn insufficient_precision_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = slk(&["verify", "mertens", "--j", "1", "--terms", "1"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"], "InsufficientPrecision");
}

#[test]
fn failed_identity_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = slk(&["verify", "mertens", "--j", "1", "--parity", "even"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = slk(&["verify", "mertens", "--j", "1", "--parity", "even", "--adjusted"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let out = slk(&["verify", "ahlgren-kim", "--j", "1", "--adjusted"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let out = slk(&["verify", "vector", "--j", "1", "--adjusted", "--format", "text"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("vector"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(slk(&["verify", "bogus"], dir.path()).status.code(), Some(1));
    assert_eq!(slk(&["verify", "mertens", "--j", "0"], dir.path()).status.code(), Some(1));
    assert_eq!(slk(&["verify", "mertens"], dir.path()).status.code(), Some(1));
    let out = slk(&["lift", "eval", "--j", "1", "--point", "1", "--coeffs", "nope"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let out = slk(&["verify", "ahlgren-kim", "--j", "2", "--adjusted", "--out", file.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&file).unwrap(), out.stdout);
}

#[test]
fn verify_all_lists_every_identity() {
    let dir = tempfile::tempdir().unwrap();
    let out = slk(&["verify", "all", "--jmax", "2", "--tmax", "50", "--adjusted"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["identity"].as_str().unwrap()).collect();
    assert_eq!(ids.len(), 9);
    assert_eq!(ids[0], "classical");
    // the printed readings include failing identities
    let out = slk(&["verify", "all", "--jmax", "1", "--tmax", "50"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hurwitz_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("h.txt");
    let out = slk(&["tables", "hurwitz", "--max", "12", "--out", file.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&file).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("selberg-lift-kit-table v1 hurwitz 12"));
    assert_eq!(lines.next(), Some("0,-1,12"));
    assert!(text.contains("\n3,1,3\n"));
    assert!(text.contains("\n4,1,2\n"));
}

#[test]
fn lift_eval_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("c.txt");
    std::fs::write(&coeffs, "# t,r,m_num,m_den,c\n1,0,-3,4,1.5\n0,0,-2,1,-0.25\n").unwrap();
    let out = slk(&["lift", "eval", "--j", "2", "--point", "2,3", "--coeffs", coeffs.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let a = v["hypergeometric"].as_f64().unwrap();
    let b = v["simplified"].as_f64().unwrap();
    assert!((a - b).abs() <= 1e-9 * b.abs());
    let out =
        slk(&["lift", "eval", "--j", "2", "--point", "2.0,3.0", "--coeffs", coeffs.to_str().unwrap()], dir.path());
    let v = json(&out);
    assert!((v["hypergeometric"].as_f64().unwrap() - a).abs() <= 1e-9 * a.abs());
    assert_eq!(v["simplified"], Value::Null);
}

#[test]
fn selftest_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = slk(&["selftest", "--format", "text"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 8);
}
