use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn graph(name: &str) -> String {
    root().join("data/graphs").join(format!("{name}.json")).display().to_string()
}

fn family(name: &str) -> String {
    root().join("data/families").join(format!("{name}.json")).display().to_string()
}

fn run_with(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_graphconf"));
    cmd.args(args).env_remove("GRAPHCONF_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("GRAPHCONF_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = run_with(args, None);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().expect("exit code"), v)
}

fn schema_errors(schema: &str, v: &Value) -> Vec<String> {
    let mut opts = jsonschema::options();
    for entry in fs::read_dir(root().join("schemas")).unwrap() {
        let path = entry.unwrap().path();
        let s: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let uri = format!("json-schema:///{}", path.file_name().unwrap().to_string_lossy());
        opts.with_resource(uri, jsonschema::Resource::from_contents(s).unwrap());
    }
    let s: Value = serde_json::from_str(&fs::read_to_string(root().join("schemas").join(schema)).unwrap()).unwrap();
    let validator = opts.build(&s).unwrap();
    validator.iter_errors(v).map(|e| e.to_string()).collect()
}

fn validate(schema: &str, v: &Value) {
    let errors = schema_errors(schema, v);
    assert!(errors.is_empty(), "{schema}: {errors:?}");
}

#[test]
fn schemas_reject_malformed_reports() {
    let bad = serde_json::json!({"q": 1, "betti": -1, "torsion": [], "cells": [1]});
    assert!(!schema_errors("homology_report.schema.json", &bad).is_empty());
    let bad = serde_json::json!({"n": 2, "max_q": 2, "rows": [], "verdict": "maybe"});
    assert!(!schema_errors("oracle_comparison.schema.json", &bad).is_empty());
    let bad = serde_json::json!({"status": "budget_exceeded", "message": "x", "count": "many"});
    assert!(!schema_errors("error_report.schema.json", &bad).is_empty());
}

#[test]
fn sample_inputs_match_schemas() {
    for entry in fs::read_dir(root().join("data/graphs")).unwrap() {
        let v: Value = serde_json::from_str(&fs::read_to_string(entry.unwrap().path()).unwrap()).unwrap();
        validate("graph.schema.json", &v);
    }
    for entry in fs::read_dir(root().join("data/families")).unwrap() {
        let v: Value = serde_json::from_str(&fs::read_to_string(entry.unwrap().path()).unwrap()).unwrap();
        validate("family.schema.json", &v);
    }
}

#[test]
fn two_sink_interval_model() {
    let (code, v) = run(&["model", "--graph", &graph("interval"), "--n", "2", "--sinks", "0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["f_vector"], serde_json::json!([10, 12, 2]));
    assert_eq!(v["euler_characteristic"], 0);
    validate("model_report.schema.json", &v);
}

#[test]
fn homology_of_star() {
    let (code, v) = run(&["homology", "--graph", &graph("star3"), "--n", "2", "--q", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["betti"], 1);
    assert_eq!(v["q"], 1);
    assert_eq!(v["torsion"], serde_json::json!([]));
    validate("homology_report.schema.json", &v);
    let (_, all) = run(&["homology", "--graph", &graph("star3"), "--n", "2"]);
    assert_eq!(all.as_array().unwrap().len(), 3);
    validate("homology_report.schema.json", &all);
}

#[test]
fn oracle_match() {
    let (code, v) = run(&["oracle-compare", "--graph", &graph("h"), "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "MATCH");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    validate("oracle_comparison.schema.json", &v);
}

#[test]
fn generation_check() {
    let (code, v) = run(&[
        "generation-check", "--family", &family("star"), "--n", "2", "--q", "1", "--degree", "4", "--sizes", "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["over_z"], true);
    assert_eq!(v["bound_passes"], true);
    validate("generation_report.schema.json", &v);
}

#[test]
fn tree_generators() {
    let (code, v) = run(&["tree-generators", "--graph", &graph("h"), "--n", "3", "--q", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["generates_over_z"], true);
    validate("tree_generator_report.schema.json", &v);
    let (code, v) = run(&["tree-generators", "--graph", &graph("cycle3"), "--n", "2", "--q", "1"]);
    assert_eq!(code, 2);
    validate("error_report.schema.json", &v);
}

#[test]
fn rep_stability() {
    let (code, v) = run(&["rep-stability", "--family", &family("star"), "--n", "2", "--q", "1", "--window", "5..7"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["stable"], true);
    validate("rep_stability_report.schema.json", &v);
}

#[test]
fn poly_fit() {
    let args = ["poly-fit", "--family", &family("star"), "--n", "2", "--q", "1", "--window", "3..7"];
    let (code, v) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(v["coefficients"], serde_json::json!(["1", "-3", "1"]));
    validate("poly_fit_report.schema.json", &v);
    // a line cannot fit k² - 3k + 1
    let (code, v) = run(&[&args[..], &["--degree", "1"]].concat());
    assert_eq!(code, 1);
    assert_eq!(v["fits"], false);
}

#[test]
fn exit_codes() {
    let (code, v) = run(&["model", "--graph", &graph("star4"), "--n", "3", "--max-cells", "100"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "budget_exceeded");
    validate("error_report.schema.json", &v);
    let (code, v) = run(&["model", "--graph", "/nonexistent/g.json", "--n", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "invalid_config");
    let (code, _) = run(&["model", "--graph", &graph("star3"), "--n", "2", "--sinks", "9"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["rep-stability", "--family", &family("star"), "--n", "2", "--q", "1", "--window", "7..5"]);
    assert_eq!(code, 2);
    let (code, _) = run(&[
        "generation-check", "--family", &family("star"), "--n", "2", "--q", "1", "--degree", "6", "--sizes", "5",
    ]);
    assert_eq!(code, 2);
    let out = run_with(&["model", "--n", "2"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_tables_and_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with(
        &[
            "oracle-compare", "--graph", &graph("star3"), "--n", "2", "--format", "csv", "--out",
            dir.path().to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,model_betti,oracle_betti,model_torsion,oracle_torsion,match"));
    assert_eq!(lines.next(), Some("0,1,1,,,true"));
    assert_eq!(fs::read_to_string(dir.path().join("oracle-compare.csv")).unwrap(), text);
    let json: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("oracle-compare.json")).unwrap()).unwrap();
    assert_eq!(json["verdict"], "MATCH");
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["homology", "--graph", &graph("h"), "--n", "2"];
    let first = run_with(&args, Some(dir.path()));
    let entries: Vec<PathBuf> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    let second = run_with(&args, Some(dir.path()));
    assert_eq!(first.stdout, second.stdout);
    let uncached = run_with(&args, None);
    assert_eq!(first.stdout, uncached.stdout);

    fs::write(&entries[0], "garbage").unwrap();
    let repaired = run_with(&args, Some(dir.path()));
    assert_eq!(repaired.status.code(), Some(0));
    assert_eq!(repaired.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&repaired.stderr).contains("corrupt"));
    assert_ne!(fs::read_to_string(&entries[0]).unwrap(), "garbage");

    // the same tree with vertices renamed is a different entry
    let renamed = dir.path().join("renamed.json");
    fs::write(
        &renamed,
        r#"{"vertices":[0,1,2,3,4,5],"edges":[[5,4],[5,2],[5,3],[4,1],[4,0]],"basepoint":5}"#,
    )
    .unwrap();
    let other = tempfile::tempdir().unwrap();
    let a = run_with(&["model", "--graph", renamed.to_str().unwrap(), "--n", "2"], Some(other.path()));
    let b = run_with(&["model", "--graph", &graph("h"), "--n", "2"], Some(other.path()));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(fs::read_dir(other.path()).unwrap().count(), 2);
}

#[test]
fn deterministic_output() {
    let args = ["rep-stability", "--family", &family("star"), "--n", "2", "--q", "1", "--window", "4,5", "--jobs", "2"];
    let a = run_with(&args, None);
    let b = run_with(&args, None);
    assert_eq!(a.stdout, b.stdout);

    let args = ["generation-check", "--family", &family("star"), "--n", "2", "--q", "1", "--degree", "3", "--sizes", "4"];
    let strip = |out: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    assert_eq!(strip(&run_with(&args, None)), strip(&run_with(&args, None)));
}
