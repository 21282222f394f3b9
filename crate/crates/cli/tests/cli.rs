use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const ROBINSON_POINTS: &str =
    r#"{"mode":"affine","points":[["-1","-1"],["-1","0"],["-1","1"],["0","-1"],["0","1"],["1","-1"],["1","0"],["1","1"]]}"#;

const ROBINSON: &str = "x^6 - x^4 y^2 - x^4 z^2 - x^2 y^4 + 3 x^2 y^2 z^2 - x^2 z^4 + y^6 - y^4 z^2 - y^2 z^4 + z^6";

const M_T: &str = "(1 - 2 t2) (x^4 y^2 + x^2 y^4) + t2^2 (x^4 z^2 + y^4 z^2) \
                   - (3 - 8 t2 + 2 t2^2) x^2 y^2 z^2 - 2 t2 (x^2 + y^2) z^4 + z^6";

fn hilbert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbert")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = hilbert(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn certify_robinson_not_sos() {
    let dir = TempDir::new().unwrap();
    let pts = file(&dir, "a.json", ROBINSON_POINTS);
    let poly = file(&dir, "r.txt", ROBINSON);
    let (code, v) = json(&["certify", "not-sos", "--poly", s(&poly), "--points", s(&pts), "--degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["verb"], "certify");
    assert_eq!(v["pass"], true);
}

#[test]
fn certify_rejects_nonsingular_input() {
    let dir = TempDir::new().unwrap();
    let pts = file(&dir, "a.json", ROBINSON_POINTS);
    let poly = file(&dir, "p.txt", "x^6 + y^6 + z^6");
    let out = hilbert(&["certify", "not-sos", "--poly", s(&poly), "--points", s(&pts), "--degree", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn audit_finds_negativity_past_the_boundary() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "mt.txt", M_T);
    let vars = ["--vars", "x,y,z,t2"];
    let bad = ["audit", "--poly", s(&poly), "--param", "t2=3/5", "--samples", "20000"];
    let (code, v) = json(&[&bad[..], &vars[..]].concat());
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
    let good = ["audit", "--poly", s(&poly), "--param", "t2=1/4", "--samples", "20000"];
    let (code, _) = json(&[&good[..], &vars[..]].concat());
    assert_eq!(code, 0);
}

#[test]
fn catalog_lists_and_shows() {
    let out = hilbert(&["catalog", "list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("motzkin") && text.contains("gondola"));

    let dir = TempDir::new().unwrap();
    let emit = dir.path().join("r.json");
    let (code, _) = json(&["catalog", "show", "--name", "R_t", "--param", "t=2", "--emit", s(&emit)]);
    assert_eq!(code, 0);
    let pj: Value = serde_json::from_str(&fs::read_to_string(&emit).unwrap()).unwrap();
    assert_eq!(pj["vars"], serde_json::json!(["x", "y", "z"]));
}

#[test]
fn catalog_errors_exit_two() {
    assert_eq!(hilbert(&["catalog", "show", "--name", "nonesuch"]).status.code(), Some(2));
    assert_eq!(hilbert(&["catalog", "show", "--name", "R_t"]).status.code(), Some(2));
    assert_eq!(hilbert(&["catalog", "show", "--name", "R_t", "--param", "t=0"]).status.code(), Some(2));
}

#[test]
fn catalog_verify_single_identity() {
    let (code, v) = json(&["catalog", "verify", "--name", "multiplier_block_discriminant"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
}

#[test]
fn analysis_verbs() {
    let (code, _) = json(&["analysis", "sigma", "--c1", "1", "--c3", "0", "--digits", "6"]);
    assert_eq!(code, 0);
    let (code, _) = json(&["analysis", "triangle", "--r", "1", "--s", "1", "--t", "1"]);
    assert_eq!(code, 0);
    let (code, _) = json(&["analysis", "triangle", "--r", "1", "--s", "1", "--t", "3"]);
    assert_eq!(code, 1);
    let (code, _) = json(&["analysis", "classify", "--c1", "0", "--c2", "0", "--c3", "0", "--c4", "1"]);
    assert_eq!(code, 0);
}

#[test]
fn newton_on_motzkin() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "m.txt", "x^4 y^2 + x^2 y^4 - 3 x^2 y^2 z^2 + z^6");
    let (code, v) = json(&["analysis", "newton", "--poly", s(&poly)]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
}

#[test]
fn ideal_verbs() {
    let dir = TempDir::new().unwrap();
    let pts = file(&dir, "a.json", ROBINSON_POINTS);
    let (code, v) = json(&["ideal", "basis", "--points", s(&pts), "--degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["exact"]["dimension"], 2);
    let (code, v) = json(&["ideal", "forced", "--points", s(&pts), "--degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["exact"]["count"], 1);
    let (code, _) = json(&["ideal", "gap", "--points", s(&pts), "--degree", "3"]);
    assert_eq!(code, 0);
}

#[test]
fn interp_biermann_and_gondola() {
    let (code, _) = json(&["interp", "biermann", "--r", "1", "--s", "1", "--d", "3"]);
    assert_eq!(code, 0);
    let (code, _) = json(&["interp", "gondola", "--d", "3", "--c", "1"]);
    assert_eq!(code, 0);
    let (code, _) = json(&["interp", "gondola", "--d", "2", "--c", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn construct_on_robinson_points() {
    let dir = TempDir::new().unwrap();
    let pts = file(&dir, "a.json", ROBINSON_POINTS);
    let emit = dir.path().join("p.json");
    let (code, v) = json(&[
        "construct", "--points", s(&pts), "--degree", "3", "--c", "1/2", "--samples", "20000", "--emit", s(&emit),
    ]);
    assert_eq!(code, 0, "{v}");
    assert!(emit.exists());
}

#[test]
fn text_output_ends_with_verdict() {
    let out = hilbert(&["analysis", "region", "--r", "1", "--s", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last == "PASS" || last == "FAIL");
}

#[test]
fn missing_file_exits_two() {
    let out = hilbert(&["ideal", "basis", "--points", "/nonexistent/points.json", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("error"));
}
