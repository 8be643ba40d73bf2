use std::fs;
use std::process::{Command, Output};

fn drinhida(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drinhida"))
        .args(args)
        .env_remove("DRINHIDA_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn graph_over_three() {
    let out = drinhida(&["hecke", "graph", "--q", "3", "--varpi", "T", "--m", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let js: Vec<&str> = v["nodes"].as_array().unwrap().iter().map(|n| n["j"].as_str().unwrap()).collect();
    assert_eq!(js, ["0", "1", "2"]);
    assert_eq!(v["nodes"][0]["ordinary"], false);
    assert_eq!(v["edges"].as_array().unwrap().len(), 5);
    let dot = drinhida(&["hecke", "graph", "--q", "3", "--varpi", "T", "--m", "1", "--dot"]);
    assert!(stdout(&dot).starts_with("digraph"));
}

#[test]
fn output_is_reproducible() {
    let args = ["hecke", "matrix", "--q", "2", "--varpi", "T^2+T+1", "--m", "2", "--k", "-2", "--op", "U"];
    let (a, b) = (drinhida(&args), drinhida(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_two() {
    let bad = drinhida(&["carlitz", "profile", "--q", "3", "--varpi", "T^^2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("parse error"), "{}", stderr(&bad));
    let reducible = drinhida(&["carlitz", "profile", "--q", "3", "--varpi", "T^2-1"]);
    assert_eq!(reducible.status.code(), Some(2));
    assert!(stderr(&reducible).contains("reducible"));
    assert_eq!(drinhida(&["carlitz", "profile", "--q", "6", "--varpi", "T"]).status.code(), Some(2));
    assert_eq!(drinhida(&["hecke", "graph", "--q", "3"]).status.code(), Some(2));
    assert_eq!(drinhida(&["iwasawa", "specialize", "--q", "3", "--varpi", "T", "--m", "4", "--k", "1", "--dirac", "1"]).status.code(), Some(2));
    assert_eq!(drinhida(&["serre-tate", "check", "--q", "3", "--varpi", "T", "--nilpotency", "3"]).status.code(), Some(2));
}

#[test]
fn cache_round_trip_and_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["hecke", "graph", "--q", "3", "--varpi", "T", "--m", "2", "--json", "--cache-dir", d];
    let first = drinhida(&args);
    let file = dir.path().join("hecke-q3-T-m2.json");
    assert!(file.exists());
    let second = drinhida(&args);
    assert_eq!(first.stdout, second.stdout);
    let text = fs::read_to_string(&file).unwrap().replacen("\"kind\": \"V\"", "\"kind\": \"F\"", 1);
    fs::write(&file, text).unwrap();
    let corrupted = drinhida(&args);
    assert_eq!(corrupted.status.code(), Some(2));
    assert!(stderr(&corrupted).contains("hash mismatch"));
}

#[test]
fn projector_towers_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(
        &good,
        r#"{"q": 3, "varpi": "T",
            "levels": [{"ring": {"precision": 1}, "matrix": [["1", "1"], ["0", "0"]]},
                       {"ring": {"precision": 2}, "matrix": [["1", "1"], ["0", "T"]]}],
            "transitions": [[["1", "0"], ["0", "1"]]]}"#,
    )
    .unwrap();
    let out = drinhida(&["projector", "run", "--tower", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["projectors"][1], serde_json::json!([["1", "T+1"], ["0", "0"]]));

    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"q": 3, "varpi": "T",
            "levels": [{"ring": {"precision": 1}, "matrix": [["1", "0"], ["0", "1"]]},
                       {"ring": {"precision": 2}, "matrix": [["1", "1"], ["0", "T"]]}],
            "transitions": [[["0", "1"], ["1", "0"]]]}"#,
    )
    .unwrap();
    let out = drinhida(&["projector", "run", "--tower", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("tower-compatibility"));
}

#[test]
fn iwasawa_commands() {
    let out = drinhida(&["iwasawa", "specialize", "--q", "3", "--varpi", "T", "--m", "2", "--k", "2", "--dirac", "1+T"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], "2*T+1");
    let dir = tempfile::tempdir().unwrap();
    let el = dir.path().join("x.json");
    fs::write(&el, r#"{"level": 2, "tame": {"0": {"T+1": "1", "1": "T"}}}"#).unwrap();
    let out = drinhida(&["iwasawa", "specialize", "--q", "3", "--varpi", "T", "--m", "2", "--k", "-2", "--element", el.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // (1+T)^{-2} + T = 1 - 2T + T = 1 + 2T mod T^2
    assert_eq!(v["value"], "2*T+1");
    let out = drinhida(&["iwasawa", "filtration", "--r", "2", "--gens", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["killed_by_maximal_ideal"], true);
}

#[test]
fn small_suite_passes() {
    let out = drinhida(&["suite", "--q", "3", "--varpi", "T", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().count(), 11);
    assert!(stdout(&out).lines().all(|l| l.contains(" PASS ")));
}

/// Top-level keys of an output against the `required` list of its schema.
fn keys_match_schema(schema: &str, value: &serde_json::Value) {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schemas/").to_string() + schema;
    let s: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let mut required: Vec<&str> = s["required"].as_array().unwrap().iter().map(|k| k.as_str().unwrap()).collect();
    let mut present: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
    required.sort();
    present.sort();
    assert_eq!(required, present, "{schema}");
}

#[test]
fn outputs_follow_the_schemas() {
    let g = drinhida(&["hecke", "graph", "--q", "3", "--varpi", "T", "--m", "2", "--json"]);
    let g: serde_json::Value = serde_json::from_slice(&g.stdout).unwrap();
    keys_match_schema("graph.v1.json", &g);
    let m = drinhida(&["hecke", "matrix", "--q", "3", "--varpi", "T", "--m", "2", "--k", "3", "--op", "T", "--locus", "all"]);
    keys_match_schema("hecke-matrix.v1.json", &serde_json::from_slice(&m.stdout).unwrap());
    let dir = tempfile::tempdir().unwrap();
    drinhida(&["hecke", "graph", "--q", "3", "--varpi", "T", "--m", "1", "--cache-dir", dir.path().to_str().unwrap()]);
    let rec: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("hecke-q3-T-m1.json")).unwrap()).unwrap();
    keys_match_schema("cache-record.v1.json", &rec);
    keys_match_schema("graph.v1.json", &rec["body"]);
}
