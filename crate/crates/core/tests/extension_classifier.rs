use nalgebra::DVector;
use orbitkit::coadjoint::generic_rank_scan;
use orbitkit::golden::Bundle;
use orbitkit::nilext::{codim1_classify, coadjoint_matrix_numeric, oracle_check, NilExtSpec};
use orbitkit::random::{random_extension, rng_for};
use orbitkit::scalar::evaluate_vec;
use orbitkit::spectrum::Gate;
use orbitkit::verdict::Rule;
use orbitkit::{Execution, DEFAULT_THETA};

fn open_specs() -> Vec<(String, NilExtSpec)> {
    let bundle = Bundle::embedded();
    let bundled = ["h3_graded.json", "filiform4_graded.json", "h3_skew.json"]
        .iter()
        .map(|name| (name.to_string(), bundle.extension(name).unwrap()));
    let random = (0..60).map(|i| (format!("random #{i}"), random_extension(&mut rng_for(404, i))));
    let specs: Vec<_> = bundled
        .chain(random)
        .filter(|(_, spec)| codim1_classify(spec, DEFAULT_THETA).unwrap().open_orbits_possible)
        .collect();
    assert!(specs.len() >= 3);
    specs
}

#[test]
fn open_orbits_require_a_passing_gate() {
    for i in 0..60 {
        let spec = random_extension(&mut rng_for(405, i));
        let r = codim1_classify(&spec, DEFAULT_THETA).unwrap();
        if r.open_orbits_possible {
            assert_eq!(r.spectral_gate.gate, Gate::Pass, "extension #{i}");
            assert_eq!(r.generic_stabilizer_dim, 0, "extension #{i}");
        }
        if r.spectral_gate.gate == Gate::Fail {
            assert!(!r.open_orbits_possible, "extension #{i}");
        }
        assert!(r.verdict.invariant_violations().is_empty());
        if r.verdict.square_integrable.is_true() {
            assert!(r.verdict.type_i.is_true());
        }
    }
}

#[test]
fn bundled_extension_verdicts() {
    let bundle = Bundle::embedded();
    let graded = codim1_classify(&bundle.extension("h3_graded.json").unwrap(), DEFAULT_THETA).unwrap();
    assert_eq!(graded.verdict.rule, Rule::C1);
    let degenerate = codim1_classify(&bundle.extension("h3_degenerate.json").unwrap(), DEFAULT_THETA).unwrap();
    assert_eq!(degenerate.spectral_gate.gate, Gate::Fail);
    assert!(!degenerate.open_orbits_possible);
    assert_eq!(degenerate.verdict.rule, Rule::C0);
    let plane = codim1_classify(&bundle.extension("plane_identity.json").unwrap(), DEFAULT_THETA).unwrap();
    assert!(!plane.conditions.center_dim_1);
    assert_eq!(plane.verdict.rule, Rule::C0);
}

#[test]
fn generic_functionals_have_no_stabilizer_away_from_n() {
    // Grid of (x, t) with entries of x in {−1, 0, 1} and |t| ≥ 0.1.
    let ts = [-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0];
    for (name, spec) in open_specs() {
        let g = spec.semidirect_algebra();
        let scan = generic_rank_scan(&g, 50, 9).unwrap();
        assert_eq!(scan.k0, 0, "{name}");
        let xi = DVector::from_vec(evaluate_vec(&scan.witness, DEFAULT_THETA).unwrap());
        let n = spec.nil().dim();
        let mut closest = f64::INFINITY;
        for code in 0..3usize.pow(n as u32) {
            let x: Vec<f64> = (0..n).map(|i| ((code / 3usize.pow(i as u32)) % 3) as f64 - 1.0).collect();
            for &t in &ts {
                let m = coadjoint_matrix_numeric(&spec, &x, t, DEFAULT_THETA).unwrap();
                closest = closest.min((&m * &xi - &xi).amax());
            }
        }
        assert!(closest > 1e-6, "{name}: some (x, t) fixes the generic functional ({closest:e})");
    }
}

#[test]
fn oracle_modes_agree() {
    let spec = NilExtSpec::heisenberg_graded();
    let seq = oracle_check(&spec, 12, 3, DEFAULT_THETA, Execution::Sequential).unwrap();
    let par = oracle_check(&spec, 12, 3, DEFAULT_THETA, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    assert!(seq.passed);
}
