use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use orbitkit::golden::Bundle;
use orbitkit::io::Document;
use orbitkit::semidirect::DiagonalSemidirectSpec;
use orbitkit::Scalar;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbitkit-cli-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitkit")).args(args).output().unwrap()
}

fn run_json(args: &[&str], tag: &str) -> (i32, Value) {
    let path = scratch(tag).join("report.json");
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    all.extend(["--json", &p]);
    let out = run(&all);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (out.status.code().unwrap(), report)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn classify_axb_is_r3() {
    let (code, report) = run_json(&["classify", data("axb.json").to_str().unwrap()], "axb");
    assert_eq!(code, 0);
    let v = &report["verdict"];
    assert_eq!(v["square_integrable"], false);
    assert_eq!(v["type_I"], true);
    assert_eq!(v["rule"], "R3");
    assert_eq!(report["status"], "determined");
}

#[test]
fn classify_codim3_is_r4_with_warning() {
    let (code, report) = run_json(&["classify", data("codim3.json").to_str().unwrap()], "codim3");
    assert_eq!(code, 0);
    let v = &report["verdict"];
    assert_eq!(v["square_integrable"], true);
    assert_eq!(v["type_I"], false);
    assert_eq!(v["rule"], "R4");
    assert!(!report["warnings"].as_array().unwrap().is_empty());
    let block = report["results"].as_array().unwrap().iter().find(|b| b["name"] == "classification");
    assert_eq!(block.unwrap()["method"], "exact");
}

#[test]
fn broken_jacobi_is_a_validation_failure() {
    let out = run(&["validate", data("broken_jacobi.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("Jacobi identity fails"));
}

#[test]
fn invalid_derivation_lists_violations() {
    let dir = scratch("bad-derivation");
    let path = dir.join("bad.json");
    // On h3, D = diag(1, 0, 0) sends [e0, e1] = e2 to 0 but [De0, e1] = e2.
    std::fs::write(
        &path,
        r#"{"type": "nilpotent_extension",
            "nil": {"dim": 3, "brackets": [{"i": 0, "j": 1, "coeffs": ["0", "0", "1"]}]},
            "D": [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]}"#,
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("error:"));
}

#[test]
fn unknown_type_is_an_input_error() {
    let dir = scratch("unknown");
    let path = dir.join("mystery.json");
    std::fs::write(&path, r#"{"type": "mystery"}"#).unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("unknown type \"mystery\""));
}

#[test]
fn missing_file_and_bad_flags_are_input_errors() {
    assert_eq!(run(&["validate", "/nonexistent/x.json"]).status.code(), Some(4));
    let h3 = data("h3.json");
    assert_eq!(run(&["analyze", h3.to_str().unwrap(), "--samples", "0"]).status.code(), Some(4));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn rational_theta_gives_undetermined() {
    let dir = scratch("rational");
    let path = dir.join("codim3_rational.json");
    let doc = Document::Semidirect(DiagonalSemidirectSpec::codim3_with(Scalar::one()));
    std::fs::write(&path, doc.to_json_pretty()).unwrap();
    let (code, report) = run_json(&["classify", path.to_str().unwrap()], "rational-report");
    assert_eq!(code, 3);
    assert_eq!(report["verdict"]["rule"], "R1");
    assert_eq!(report["verdict"]["type_I"], "undetermined");
    assert!(!report["verdict"]["reasons"].as_array().unwrap().is_empty());
}

#[test]
fn classify_accepts_explicit_points() {
    let axb = data("axb.json");
    let (code, report) = run_json(&["classify", axb.to_str().unwrap(), "--p", "0", "--xi", "1,theta"], "zero");
    // p = 0: the quasi-orbit is not open.
    assert_eq!(code, 3);
    assert_eq!(report["verdict"]["rule"], "R1");
    let out = run(&["classify", axb.to_str().unwrap(), "--p", "1,1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn extension_commands() {
    let graded = data("h3_graded.json");
    let out = run(&["classify", graded.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rule=C1"));

    let (code, report) = run_json(&["analyze", data("h3_degenerate.json").to_str().unwrap()], "degenerate");
    assert_eq!(code, 3);
    assert_eq!(report["verdict"]["rule"], "C0");
    let gate = report["results"].as_array().unwrap().iter().find(|b| b["name"] == "spectral_gate").unwrap();
    assert_eq!(gate["value"]["gate"], "fail");

    let (code, report) = run_json(&["oracle-check", graded.to_str().unwrap(), "--trials", "10"], "oracle");
    assert_eq!(code, 0);
    assert_eq!(report["results"][0]["method"], "numeric");
    assert_eq!(report["request"]["trials"], 10);
}

#[test]
fn analyze_algebra_reports_generic_rank() {
    let (code, report) = run_json(&["analyze", data("h3.json").to_str().unwrap(), "--seed", "5"], "h3");
    assert_eq!(code, 0);
    let block = report["results"].as_array().unwrap().iter().find(|b| b["name"] == "coadjoint").unwrap();
    assert_eq!(block["value"]["k0"], 1);
    assert_eq!(report["request"]["seed"], 5);
    assert_eq!(report["request"]["sample_count"], 200);
}

#[test]
fn golden_passes_and_is_deterministic() {
    let a = run(&["golden"]);
    let b = run(&["golden", "--sequential"]);
    assert_eq!(a.status.code(), Some(0));
    let table = |o: &Output| stdout(o).lines().take_while(|l| !l.is_empty()).collect::<Vec<_>>().join("\n");
    assert_eq!(table(&a), table(&b));
    assert_eq!(table(&a).lines().count(), 10);
}

#[test]
fn golden_reports_a_tampered_codim3_file() {
    let dir = scratch("tampered");
    for name in Bundle::file_names() {
        std::fs::write(dir.join(name), Bundle::raw(name).unwrap()).unwrap();
    }
    let tampered = Document::Semidirect(DiagonalSemidirectSpec::codim3_with(Scalar::one()));
    std::fs::write(dir.join("codim3.json"), tampered.to_json_pretty()).unwrap();
    let out = run(&["golden", "--dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("criterion 2 (codim3 golden) failed"), "{text}");
    assert!(text.contains("criterion 3 (density sensitivity) failed"), "{text}");
    assert!(!text.contains("criterion 1 "), "{text}");
}
