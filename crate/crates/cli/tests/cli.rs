use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_affconj");

struct Run {
    code: i32,
    stdout: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).expect("stdout is JSON")
    }
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(BIN).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const F: &str = r#"{"A":[["1","1","0"],["0","1","0"],["0","0","1/2"]],"b":["0","1","0"]}"#;
// S⁻¹ (A, b) S with S = [[1,1,0],[0,1,0],[1,0,1]].
const G: &str = r#"{"A":[["1","1","0"],["0","1","0"],["-1/2","-1","1/2"]],"b":["-1","1","1"]}"#;
const ROT: &str = r#"{"A":[["0","-1"],["1","0"]],"b":["0","0"]}"#;

#[test]
fn canonical_translation() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"A":[["1"]],"b":["1"]}"#);
    let r = run(&["canonical", &f]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["display"], "NoFixedPoint{k:1,eps:+1,segre:[]}");
    assert_eq!(v["canonical"]["k"], 1);
    assert_eq!(v["canonical"]["epsilon"], 1);
}

#[test]
fn decide_base_change_is_conjugate() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", F);
    let g = write(dir.path(), "g.json", G);
    let r = run(&["decide", &f, &g]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json()["verdict"]["reason"], "CONJUGATE");
}

#[test]
fn decide_not_conjugate_exits_one() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        r#"{"A":[["1","0"],["0","2"]],"b":["1","0"]}"#,
    );
    let g = write(
        dir.path(),
        "g.json",
        r#"{"A":[["1","0"],["0","-2"]],"b":["1","0"]}"#,
    );
    let r = run(&["decide", &f, &g]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["verdict"]["conjugate"], false);
}

#[test]
fn rotation_hits_root_of_unity_precondition() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "r.json", ROT);
    let r = run(&["decide", &f, &f]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json()["error"]["code"], "ROOT_OF_UNITY_PRECONDITION");
}

#[test]
fn dimension_mismatch_is_precondition() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", F);
    let g = write(dir.path(), "g.json", r#"{"A":[["1"]],"b":["1"]}"#);
    assert_eq!(run(&["decide", &f, &g]).code, 2);
}

#[test]
fn parse_errors_exit_three() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"A":[["1","x"]],"b":["1"]}"#);
    let r = run(&["canonical", &bad]);
    assert_eq!(r.code, 3);
    assert!(r.json()["error"]["code"].is_string());
    assert_eq!(run(&["canonical", "/nonexistent/op.json"]).code, 3);
    assert_eq!(run(&["no-such-command"]).code, 3);
}

#[test]
fn fixed_point_and_split() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        r#"{"A":[["2","0"],["0","0"]],"b":["1","3"]}"#,
    );
    let r = run(&["fixed-point", &f]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["fixed_point"], serde_json::json!(["-1", "3"]));
    let t = write(dir.path(), "t.json", r#"{"A":[["1"]],"b":["1"]}"#);
    assert!(run(&["fixed-point", &t]).json()["fixed_point"].is_null());
    let pretty = run(&["--format", "pretty", "fixed-point", &t]);
    assert!(pretty.stdout.contains("fixed_point: none"));
    let s = run(&["split", &f]).json();
    assert_eq!(s["modulus_partition"]["n0"], 1);
    assert_eq!(s["modulus_partition"]["n1inf"], 1);
}

#[test]
fn witness_then_verify() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", F);
    let h = dir.path().join("h.json");
    let h = h.to_str().unwrap();
    let r = run(&["witness", &f, "-o", h]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json()["passed"], true);
    let file: Value = serde_json::from_str(&std::fs::read_to_string(h).unwrap()).unwrap();
    let canon = write(
        dir.path(),
        "canon.json",
        &file["canonical_operator"].to_string(),
    );
    let v = run(&["verify", &f, &canon, h]);
    assert_eq!(v.code, 0, "{}", v.stdout);
    let report = v.json();
    assert_eq!(report["passed"], true);
    assert!(report["residual"]["conjugacy"].as_f64().unwrap() <= 1e-9);
    let other = write(
        dir.path(),
        "other.json",
        r#"{"A":[["1","0","0"],["0","1","0"],["0","0","3"]],"b":["1","0","0"]}"#,
    );
    assert_eq!(run(&["verify", &f, &other, h]).code, 1);
}

fn leaves(v: &Value, key: &str, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| leaves(x, k, out)),
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            a.iter().for_each(|x| leaves(x, key, out))
        }
        Value::String(s) => out.push((key.to_owned(), s.clone())),
        Value::Null => out.push((key.to_owned(), "none".to_owned())),
        Value::Array(_) => out.push((key.to_owned(), String::new())),
        other => out.push((key.to_owned(), other.to_string())),
    }
}

#[test]
fn pretty_and_json_carry_the_same_fields() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", F);
    let g = write(dir.path(), "g.json", G);
    let json = run(&["decide", &f, &g]);
    let pretty = run(&["--format", "pretty", "decide", &f, &g]);
    assert_eq!(json.code, pretty.code);
    let mut fields = Vec::new();
    leaves(&json.json(), "", &mut fields);
    assert!(!fields.is_empty());
    for (k, v) in fields {
        let line = format!("{k}: {v}");
        assert!(
            pretty.stdout.contains(line.trim_end()),
            "missing {line:?} in\n{}",
            pretty.stdout
        );
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", F);
    let g = write(dir.path(), "g.json", G);
    for args in [
        vec!["decide", &f, &g],
        vec!["witness", &f],
        vec!["--seed", "7", "witness", &f],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.code, b.code);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn corpus_mode() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "a.json", F);
    write(dir.path(), "b.json", G);
    write(dir.path(), "c.json", r#"{"A":[["1"]],"b":["1"]}"#);
    let d = dir.path().to_str().unwrap();
    let r = run(&["--corpus", d, "canonical"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json()["results"].as_array().unwrap().len(), 3);
    let r = run(&["--corpus", d, "decide"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let results = r.json()["results"].as_array().unwrap().clone();
    assert_eq!(results.len(), 1);
    assert_eq!(results[0]["report"]["verdict"]["reason"], "CONJUGATE");
    assert_eq!(run(&["--corpus", d, "decide"]).stdout, r.stdout);
}
