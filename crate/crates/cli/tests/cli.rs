//! End-to-end runs of the `polyent` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn polyent(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyent"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn family(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["family"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", name]);
    assert!(polyent(dir.path(), &full).status.success());
    path
}

#[test]
fn family_files_round_trip() {
    let dir = TempDir::new().unwrap();
    family(&dir, "g3.json", &["--kind", "gn", "--n", "3"]);
    let first = std::fs::read_to_string(dir.path().join("g3.json")).unwrap();
    let map: polyent_core::PLMap = serde_json::from_str(&first).unwrap();
    assert_eq!(map, polyent_core::families::make(&polyent_core::families::FamilySpec::Gn { n: 3 }));
    assert_eq!(serde_json::to_string_pretty(&map).unwrap() + "\n", first);

    assert!(polyent(dir.path(), &["double", "g3.json", "-k", "1", "-o", "d.json"]).status.success());
    let d: polyent_core::PLMap = serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
    assert_eq!(d, polyent_core::families::double(&map));
}

#[test]
fn hpol_of_g2_is_two() {
    let dir = TempDir::new().unwrap();
    family(&dir, "g2.json", &["--kind", "gn", "--n", "2"]);
    let out = polyent(dir.path(), &["hpol", "g2.json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"]["h_pol"], 2);
    assert_eq!(report["inputs"][0]["path"], "g2.json");
    assert_eq!(report["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(report["command"][0], "polyent");
}

#[test]
fn tent_is_infinite_at_budget_zero() {
    let dir = TempDir::new().unwrap();
    family(&dir, "tent.json", &["--kind", "tent"]);
    let out = polyent(dir.path(), &["hpol", "--budget", "0", "tent.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["h_pol"], "INFINITE");
    assert_eq!(r["result"]["type"]["period"], 3);
}

#[test]
fn undecided_runs_exit_two() {
    let dir = TempDir::new().unwrap();
    family(&dir, "f0.json", &["--kind", "f0"]);
    assert!(polyent(dir.path(), &["double", "f0.json", "-k", "2", "-o", "d.json"]).status.success());
    let out = polyent(dir.path(), &["hpol", "--budget", "2", "d.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["h_pol"], "UNKNOWN");
    let out = polyent(dir.path(), &["hpol", "--budget", "3", "d.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["h_pol"], 2);
}

#[test]
fn horseshoe_verifies_and_tampering_is_caught() {
    let dir = TempDir::new().unwrap();
    family(&dir, "g2.json", &["--kind", "gn", "--n", "2"]);
    assert!(polyent(dir.path(), &["horseshoe", "g2.json", "-o", "cert.json"]).status.success());
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("cert.json")).unwrap()).unwrap();
    assert_eq!(cert["iterate"], 1);
    assert_eq!(cert["intervals"].as_array().unwrap().len(), 2);

    let ok = polyent(dir.path(), &["verify", "g2.json", "cert.json"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["result"]["verified"], true);

    let mut bad = cert.clone();
    bad["intervals"][1][0] = Value::String("1/8".into());
    std::fs::write(dir.path().join("bad.json"), bad.to_string()).unwrap();
    let out = polyent(dir.path(), &["verify", "g2.json", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"]["failure"]["failure"], "DisjointnessFailure");
    assert!(String::from_utf8_lossy(&out.stderr).contains("not disjoint"));
}

#[test]
fn evidence_reverifies_through_structure() {
    let dir = TempDir::new().unwrap();
    family(&dir, "f0.json", &["--kind", "f0"]);
    assert!(polyent(dir.path(), &["double", "f0.json", "-k", "1", "-o", "d.json"]).status.success());
    let r = json(&polyent(dir.path(), &["hpol", "d.json"]));
    let evidence = &r["result"]["evidence"];
    assert_eq!(evidence["kind"], "chain");
    let iterate = evidence["iterate"].as_u64().unwrap().to_string();
    let s = json(&polyent(dir.path(), &["structure", "d.json", "--iterate", &iterate]));
    assert_eq!(s["result"]["structure"]["chain_length"], r["result"]["h_pol"]);
    let chain: Vec<Value> = s["result"]["structure"]["chain"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| s["result"]["structure"]["essential"][i.as_u64().unwrap() as usize].clone())
        .collect();
    assert_eq!(&Value::Array(chain), &evidence["chain"]);
}

#[test]
fn reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    family(&dir, "g1.json", &["--kind", "gn", "--n", "1"]);
    let args = ["sep-estimate", "g1.json", "--eps", "0.1,0.05", "--n-max", "32", "--seed", "9"];
    let a = polyent(dir.path(), &args);
    let b = polyent(dir.path(), &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 9);
}

#[test]
fn csv_outputs() {
    let dir = TempDir::new().unwrap();
    let out = polyent(dir.path(), &["logistic", "--sweep", "3.1:3.5:0.1", "-o", "t.csv"]);
    assert!(out.status.success());
    let table = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "lambda,period,h_pol");
    assert_eq!(lines[1], "3.1,2,2");
    assert_eq!(lines[5], "3.5,4,3");

    let out = polyent(dir.path(), &["subshift", "--sturmian", "1", "--n-max", "16", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(6), Some("5,6"));

    let out = polyent(dir.path(), &["hpol", "missing.json", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sequence_files_and_dendrite_bound() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("seq.txt"), "01".repeat(2000) + "\n").unwrap();
    let out = polyent(dir.path(), &["dendrite-bound", "--input", "seq.txt", "--n-max", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!((r["result"]["bracket"]["upper_value"].as_f64().unwrap() - 1.0).abs() < 0.05);
    assert_eq!(r["inputs"][0]["path"], "seq.txt");

    std::fs::write(dir.path().join("short.txt"), "0101").unwrap();
    let out = polyent(dir.path(), &["subshift", "--input", "short.txt", "--n-max", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prefix too short"));
}

#[test]
fn usage_errors_fail() {
    let dir = TempDir::new().unwrap();
    assert_ne!(polyent(dir.path(), &["frobnicate"]).status.code(), Some(0));
    let out = polyent(dir.path(), &["family", "--kind", "gn"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));
    std::fs::write(dir.path().join("bad.json"), r#"{"breakpoints":[{"x":"0","y":"0"},{"x":"0","y":"1"},{"x":"1","y":"1"}]}"#).unwrap();
    assert_eq!(polyent(dir.path(), &["hpol", "bad.json"]).status.code(), Some(1));
}
