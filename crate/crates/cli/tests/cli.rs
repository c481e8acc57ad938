use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(name: &str) -> String {
    repo().join("data").join(name).to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropmech")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn goldens() {
    let cases: [(&[&str], &str); 6] = [
        (&["analyze", &data("counter.json")], "analyze-counter.json"),
        (&["enumerate", "cube:2", "--orbits", "full"], "enumerate-cube2-full.json"),
        (&["check", &data("square-diagonal.json")], "check-square-diagonal.json"),
        (&["construct", "--kind", "cardinality", "--items", "3"], "construct-cardinality-3.json"),
        (&["affine", &data("affine-2x2.json")], "affine-2x2.json"),
        (&["render", &data("newton-quadrangle.json"), "--target", "dual-subdivision"], "newton-quadrangle-dual.svg"),
    ];
    for (args, file) in cases {
        assert_eq!(stdout(args), golden(file), "{file}");
    }
}

#[test]
fn byte_identical_reruns() {
    let runs: [&[&str]; 4] = [
        &["analyze", &data("counter.json")],
        &["enumerate", "cube:3", "--orbits", "sym"],
        &["render", &data("multi-unit-2x3.json"), "--target", "tight-span"],
        &["render", &data("bundling.json"), "--target", "difference-sets", "--viewport", "-1,3,-1,3"],
    ];
    for args in runs {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
    let seeded = stdout(&["enumerate", "cube:3", "--orbits", "full", "--seed", "11"]);
    assert_eq!(seeded, stdout(&["enumerate", "cube:3", "--orbits", "full"]));
}

#[test]
fn reports_validate_against_schema() {
    let schema: Value =
        serde_json::from_str(&fs::read_to_string(repo().join("docs/schema/analyze-report.v1.json")).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    for file in ["counter.json", "independent.json", "bundling.json"] {
        let report = json(&["analyze", &data(file)]);
        assert!(compiled.is_valid(&report), "{file}");
    }
    let dir = tempfile::tempdir().unwrap();
    let robust = dir.path().join("robust.json");
    let robust = robust.to_str().unwrap();
    stdout(&["construct", "--kind", "hamming", "--items", "5", "--out", robust]);
    let report = json(&["analyze", robust]);
    assert!(compiled.is_valid(&report));
    assert_eq!(report["complex_verified"], Value::Null);
    let mut broken = json(&["analyze", &data("counter.json")]);
    broken["items"] = Value::from("three");
    assert!(!compiled.is_valid(&broken));
}

#[test]
fn counter_report() {
    let r = json(&["analyze", &data("counter.json")]);
    assert_eq!(r["facets"].as_array().unwrap().len(), 5);
    assert_eq!(r["nondegenerate"], true);
    assert_eq!(r["sensitivity"]["hamming"], 2);
    assert_eq!(r["tight_span"]["edges"].as_array().unwrap().len(), 4);
    assert_eq!(r["complex_verified"], true);
    assert_eq!(r["zero_cycle_audit"]["nonzero_cycles"], 0);
}

#[test]
fn enumeration_counts() {
    let e = json(&["enumerate", "cube:3", "--regular-only", "--orbits", "full"]);
    assert_eq!((e["triangulations"].as_u64(), e["regular"].as_u64(), e["count"].as_u64()), (Some(74), Some(74), Some(6)));
    let sizes: u64 = e["orbit_sizes"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(sizes, 74);
    assert_eq!(json(&["enumerate", "cube:3", "--orbits", "sym"])["count"], 23);
    assert_eq!(json(&["enumerate", "cube:2"])["count"], 2);
}

#[test]
fn outputs_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let svg = dir.path().join("r.svg");
    let out = run(&["analyze", &data("bundling.json"), "--out", report.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(&report).unwrap().contains("tropmech/analyze-report/v1"));
    let doc = fs::read_to_string(&svg).unwrap();
    assert!(doc.starts_with("<svg") && doc.trim_end().ends_with("</svg>"));
}

#[test]
fn construct_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let mech = dir.path().join("m.json");
    stdout(&["construct", "--kind", "cardinality", "--items", "4", "--out", mech.to_str().unwrap()]);
    let r = json(&["analyze", mech.to_str().unwrap()]);
    assert_eq!(r["sensitivity"]["cardinality"], 1);
    let am = json(&["construct", "--kind", "multiplayer", "--items", "2", "--players", "3"]);
    assert_eq!(am["players"], 3);
    let file = dir.path().join("am.json");
    fs::write(&file, am.to_string()).unwrap();
    let a = json(&["affine", file.to_str().unwrap()]);
    assert_eq!(a["cardinality_sensitivity"], 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("bad.json");
    fs::write(&garbage, "{ not json").unwrap();
    let bad = garbage.to_str().unwrap();
    assert_eq!(code(&["analyze", bad]), 2);
    assert_eq!(code(&["analyze", "/nonexistent/file.json"]), 2);
    assert_eq!(code(&["enumerate", "cube:x"]), 2);
    assert_eq!(code(&["construct", "--kind", "hamming", "--items", "2"]), 2);

    let overlap = dir.path().join("overlap.json");
    fs::write(&overlap, r#"{"config": "cube:2", "cells": [[0, 1, 2], [0, 1, 3]]}"#).unwrap();
    assert_eq!(code(&["check", overlap.to_str().unwrap()]), 2);

    assert_eq!(code(&["enumerate", "cube:4"]), 4);
    assert_eq!(code(&["enumerate", "simplexprod:4x2", "--regular-only"]), 4);
    assert_eq!(code(&["render", &data("counter.json"), "--target", "difference-sets"]), 5);

    let single = dir.path().join("single.json");
    fs::write(&single, r#"{"support": [[1, 1]], "coeffs": ["0"]}"#).unwrap();
    assert_eq!(code(&["render", single.to_str().unwrap(), "--target", "dual-subdivision"]), 3);

    assert_eq!(code(&["enumerate", "cube:2", "--orbits", "full"]), 0);
}

#[test]
fn square_diagonal_is_regular() {
    let c = json(&["check", &data("square-diagonal.json")]);
    assert_eq!(c["regular"], true);
    assert_eq!(c["witness"]["heights"].as_array().unwrap().len(), 4);
}
