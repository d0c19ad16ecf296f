use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scl-forge")).args(args).output().unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scl-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn cl_upper_finds_mixed_commutator() {
    let out = bin(&["cl-upper", "--word", "[a,b]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "scl-forge/v1");
    assert_eq!(v["status"], "found");
    assert_eq!(v["verified"], true);
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(bin(&["cl-upper"]).status.code(), Some(2));
    assert_eq!(bin(&["nonsense"]).status.code(), Some(2));
    assert_eq!(bin(&["cl-upper", "--word", "a(b"]).status.code(), Some(2));
    assert_eq!(bin(&["cl-upper", "--word", "a"]).status.code(), Some(2));
}

#[test]
fn torsion_marking_exits_2() {
    let pair = scratch("torsion.json", r#"{"rank": 2, "quotient_matrix": [[1], [0]], "torsion": [3]}"#);
    let out = bin(&["cl-upper", "--word", "[a,b]", "--pair", pair.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chain_norm_solved_and_infeasible() {
    let ok = scratch("ok.json", r#"{"terms": [{"word": "b", "coeff": 1}, {"word": "aBA", "coeff": 1}]}"#);
    let out = bin(&["chain-norm", "--chain", ok.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "solved");
    assert_eq!(v["dual_verified"], true);
    let lone = scratch("lone.json", r#"{"terms": [{"word": "b", "coeff": 1}]}"#);
    let out = bin(&["chain-norm", "--chain", lone.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"], "infeasible");
    let long = scratch("long.json", r#"{"terms": [{"word": "bbbbbbbb", "coeff": 1}]}"#);
    let out = bin(&["chain-norm", "--chain", long.to_str().unwrap(), "--L", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn coarse_radii() {
    let s = scratch(
        "sample.json",
        r#"{"points": ["x", "y", "z"], "dist": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]]}"#,
    );
    let out = bin(&["coarse", "--sample", s.to_str().unwrap(), "--A", "x", "--B", "y,z"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["radius_A_to_B"], "1");
    assert_eq!(v["radius_B_to_A"], "2");
    let out = bin(&["coarse", "--sample", s.to_str().unwrap(), "--A", "w", "--B", "y"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn iotakernel_writes_json_out() {
    let out_path = std::env::temp_dir().join(format!("scl-forge-iota-{}.json", std::process::id()));
    let out = bin(&["iotakernel", "--n", "3", "--json-out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["schema"], "scl-forge/v1");
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(json(&out), v);
}
