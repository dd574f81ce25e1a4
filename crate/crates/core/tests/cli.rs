use std::process::{Command, Output};

use serde_json::{json, Value};

fn vsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vsa"))
        .args(args)
        .env_remove("VSA_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = vsa(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn matrix_command() {
    let v = json_of(&["matrix", "--N", "3", "--m", "2", "--format", "json"]);
    assert_eq!(v["S"]["entries"], json!([["1", "1", "1"], ["2", "1", "0"], ["1", "0", "0"]]));
    assert_eq!(v["det"], "-1");
    assert_eq!(v["P"]["entries"], json!([["1", "1", "1"], ["0", "1", "2"], ["0", "0", "1"]]));
}

#[test]
fn coeffs_command() {
    assert_eq!(json_of(&["coeffs", "--N", "2", "--n", "-5", "--format", "json"]), json!(["-4", "1"]));
    let table = json_of(&["coeffs", "--N", "3", "--format", "json"]);
    let rows = table["table"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows.last().unwrap()["n"], -2);
}

#[test]
fn coeffs_outside_range_fails_with_record() {
    let out = vsa(&["coeffs", "--N", "2", "--n", "0"]);
    assert!(!out.status.success());
    let record: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(record["error"], "DomainError");
}

#[test]
fn span_check_command() {
    assert_eq!(
        json_of(&["span-check", "--N", "2", "--weight", "6", "--format", "json"]),
        json!({"rank": 11, "dim": 11, "ok": true})
    );
    let all = json_of(&["span-check", "--N", "1", "--max-weight", "5", "--format", "json"]);
    assert_eq!(all.as_array().unwrap().len(), 6);
}

#[test]
fn straighten_command() {
    let v = json_of(&["straighten", "a_(-1) a_(-1) vac", "--N", "1", "--format", "json"]);
    let output = v["output"].as_array().unwrap();
    assert_eq!(output.len(), 1);
    assert_eq!(output[0]["modes"][0]["vector"]["terms"][0]["partition"], json!([1, 1]));

    let t = json_of(&["straighten", "a_(-2) a_(-3) vac", "--N", "2", "--trace", "--format", "json"]);
    assert!(t["steps"].as_array().is_some_and(|s| !s.is_empty()));
    assert_eq!(t["steps"][0]["kind"], "swap");
}

#[test]
fn parse_errors_are_reported() {
    let out = vsa(&["straighten", "a_(-1", "--N", "1"]);
    assert!(!out.status.success());
    let record: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(record["error"], "ParseError");
}

#[test]
fn weight_cap_is_enforced() {
    let out = vsa(&["gens", "--N", "1", "--max-weight", "15"]);
    assert!(!out.status.success());
}

#[test]
fn json_output_is_deterministic() {
    let args = ["verify", "--suite", "combinatorics", "--seed", "3", "--format", "json"];
    let (a, b) = (vsa(&args), vsa(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gens_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gens.json");
    let p = path.to_str().unwrap();
    let first = vsa(&["gens", "--N", "2", "--max-weight", "5", "--cache", p, "--format", "json"]);
    assert!(first.status.success());
    assert!(path.exists());
    let second = vsa(&["gens", "--N", "2", "--max-weight", "5", "--cache", p, "--format", "json"]);
    assert_eq!(first.stdout, second.stdout);

    // a header for another N invalidates the file; it is rebuilt in place
    let other = vsa(&["gens", "--N", "3", "--max-weight", "5", "--cache", p, "--format", "json"]);
    assert!(other.status.success());
    assert_ne!(first.stdout, other.stdout);
    let header: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(header["N"], 3);

    std::fs::write(&path, "not json").unwrap();
    let rebuilt = vsa(&["gens", "--N", "2", "--max-weight", "5", "--cache", p, "--format", "json"]);
    assert_eq!(first.stdout, rebuilt.stdout);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_vsa"))
        .args(["gens", "--N", "1", "--max-weight", "4"])
        .env("VSA_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("gens-N1-w4.json").exists());
}
