use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn helly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helly"))
        .args(args)
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("helly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn decide_exit_codes() {
    assert_eq!(helly(&["decide", &fixture("crystal_p1.json")]).status.code(), Some(0));
    assert_eq!(helly(&["decide", &fixture("crystal_p6.json")]).status.code(), Some(3));
    let out = helly(&["decide", &fixture("crystal_p1.json")]);
    let r = json(&out);
    assert_eq!(r["command"], "decide");
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
    assert_eq!(r["result"]["decision"]["certificate"]["phi"], serde_json::json!([["1", "0"], ["0", "1"]]));
}

#[test]
fn parse_errors_carry_position() {
    let path = scratch("broken.json");
    std::fs::write(&path, "{\n  \"name\": \"x\",\n  \"dim\": 2,\n  \"generators\": [\n}").unwrap();
    let out = helly(&["decide", &path.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5"), "{err}");
    let missing = helly(&["decide", "/nonexistent/spec.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn budget_exit_code() {
    let out = helly(&["helly-graph", "--builtin", "C20"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap of 12"));
    let out = helly(&["stablenorm", &fixture("metric_l1.json"), "--bfs-budget", "20", "--k-max", "64"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at radius"));
    let out = helly(&["decide", &fixture("crystal_order3_3d.json"), "--max-dim", "2"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn tampered_certificates_fail_verification() {
    let path = scratch("sheared.json");
    let out = helly(&["decide", &fixture("crystal_sheared_b2.json"), "--json-out", &path.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(helly(&["verify", &path.to_string_lossy()]).status.code(), Some(0));
    let mut r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    r["result"]["decision"]["certificate"]["phi"][0][0] = Value::from("5");
    let bad = scratch("sheared_bad.json");
    std::fs::write(&bad, serde_json::to_string(&r).unwrap()).unwrap();
    let out = helly(&["verify", &bad.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(1));

    let path = scratch("c5.json");
    helly(&["helly-graph", "--builtin", "C5", "--json-out", &path.to_string_lossy()]);
    let mut r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    r["result"]["verdict"]["witness"][0]["radius"] = Value::from(3);
    std::fs::write(&path, serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(helly(&["verify", &path.to_string_lossy()]).status.code(), Some(1));

    let path = scratch("scaled.json");
    helly(&["scaled-helly", &fixture("scaled_grid.json"), "--json-out", &path.to_string_lossy()]);
    let mut r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    r["result"]["solution"]["point"] = Value::from(0);
    std::fs::write(&path, serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(helly(&["verify", &path.to_string_lossy()]).status.code(), Some(1));
}

#[test]
fn stablenorm_csv_and_defaults() {
    let csv = scratch("samples.csv");
    let out = helly(&["stablenorm", &fixture("metric_dim1.json"), "--k-max", "4", "--csv", &csv.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["directions"][0]["lower"], "1");
    assert_eq!(r["result"]["directions"][0]["upper"], "1");
    assert_eq!(
        std::fs::read_to_string(&csv).unwrap(),
        "direction,k,distance\n\"1\",1,1\n\"1\",2,2\n\"1\",4,4\n"
    );
    let out = helly(&["stablenorm", &fixture("metric_l1.json"), "--directions", "1,x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sources_are_exclusive() {
    let out = helly(&["helly-graph", "--builtin", "K3", "--grid", "2", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = helly(&["pushout"]);
    assert_eq!(out.status.code(), Some(2));
    let out = helly(&["verify", &fixture("crystal_p1.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn examples_match_fixture_files() {
    for name in ["z2_identity", "z4_doubling", "s3_alternating"] {
        let a = json(&helly(&["pushout", "--example", name]));
        let b = json(&helly(&["pushout", &fixture(&format!("pushout_{name}.json"))]));
        assert_eq!(a["result"], b["result"], "{name}");
        assert_eq!(a["input"], b["input"], "{name}");
    }
}
