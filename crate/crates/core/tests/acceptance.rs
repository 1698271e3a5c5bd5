//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line with the measured values.

use orbitkit::golden::{run_criterion, Bundle};
use orbitkit::Execution;

fn check(id: usize) {
    let bundle = Bundle::embedded();
    let r = run_criterion(id, &bundle, Execution::default()).expect("known criterion");
    println!(
        "[{:>2}] {:<28} {}  {}  ({:.1} ms)",
        r.id,
        r.name,
        if r.passed { "PASS" } else { "FAIL" },
        r.detail,
        r.elapsed.as_secs_f64() * 1e3
    );
    assert!(r.passed, "criterion {id} failed: {}", r.detail);
}

#[test]
fn criterion_01_axb_golden() {
    check(1);
}

#[test]
fn criterion_02_codim3_golden() {
    check(2);
}

#[test]
fn criterion_03_density_sensitivity() {
    check(3);
}

#[test]
fn criterion_04_formula_oracle() {
    check(4);
}

#[test]
fn criterion_05_psi_identity() {
    check(5);
}

#[test]
fn criterion_06_derived_annihilator_fixed() {
    check(6);
}

#[test]
fn criterion_07_affine_confinement() {
    check(7);
}

#[test]
fn criterion_08_generic_scan() {
    check(8);
}

#[test]
fn criterion_09_codim1_classifier() {
    check(9);
}

#[test]
fn criterion_10_verdict_corpus() {
    check(10);
}
