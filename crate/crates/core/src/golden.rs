//! Regression suite over the bundled example files.
//!
//! Each criterion reproduces a worked example or checks an invariant on a
//! seeded random corpus. The bundle is compiled in, but can be loaded from a
//! directory instead to check modified inputs.

use std::path::Path;
use std::time::{Duration, Instant};

use nalgebra::DVector;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::coadjoint::{check_affine_confinement, generic_rank_scan, sample_covector, FlowParams};
use crate::error::{Error, Result};
use crate::io::Document;
use crate::nilext::{codim1_classify, oracle_check, psi_identity_error, sample_rational_vector, NilExtSpec};
use crate::numeric::exp_matrix;
use crate::par::Execution;
use crate::random::{random_diagonal_spec, random_extension, random_point, random_solvable_algebra, rng_for};
use crate::scalar::{evaluate_vec, Scalar};
use crate::semidirect::{
    check_conditions_abc, classify, classify_detailed, two_n_greater_k_check, DiagonalSemidirectSpec, Point,
};
use crate::spectrum::Gate;
use crate::verdict::{Rule, Ternary};
use crate::DEFAULT_THETA;

/// Seed shared by every randomized criterion.
pub const GOLDEN_SEED: u64 = 20_240_601;

const FILES: &[(&str, &str)] = &[
    ("axb.json", include_str!("../data/axb.json")),
    ("codim3.json", include_str!("../data/codim3.json")),
    ("h3.json", include_str!("../data/h3.json")),
    ("abelian3.json", include_str!("../data/abelian3.json")),
    ("affine_line.json", include_str!("../data/affine_line.json")),
    ("filiform4.json", include_str!("../data/filiform4.json")),
    ("h3_plus_line.json", include_str!("../data/h3_plus_line.json")),
    ("broken_jacobi.json", include_str!("../data/broken_jacobi.json")),
    ("h3_graded.json", include_str!("../data/h3_graded.json")),
    ("h3_degenerate.json", include_str!("../data/h3_degenerate.json")),
    ("filiform4_graded.json", include_str!("../data/filiform4_graded.json")),
    ("h3_skew.json", include_str!("../data/h3_skew.json")),
    ("plane_identity.json", include_str!("../data/plane_identity.json")),
];

/// The parsed example files, by file name.
#[derive(Debug, Clone)]
pub struct Bundle {
    docs: Vec<(String, Document)>,
}

impl Bundle {
    pub fn embedded() -> Self {
        let docs = FILES
            .iter()
            .map(|(name, text)| {
                let doc = Document::from_json(text).unwrap_or_else(|e| panic!("bundled {name}: {e}"));
                (name.to_string(), doc)
            })
            .collect();
        Bundle { docs }
    }

    /// Reads the same file names from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let docs = FILES
            .iter()
            .map(|(name, _)| Ok((name.to_string(), Document::load(&dir.join(name))?)))
            .collect::<Result<_>>()?;
        Ok(Bundle { docs })
    }

    pub fn file_names() -> impl Iterator<Item = &'static str> {
        FILES.iter().map(|(name, _)| *name)
    }

    pub fn raw(name: &str) -> Option<&'static str> {
        FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
    }

    pub fn documents(&self) -> &[(String, Document)] {
        &self.docs
    }

    pub fn get(&self, name: &str) -> Result<&Document> {
        self.docs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d)
            .ok_or_else(|| Error::Invalid(format!("bundle has no {name}")))
    }

    pub fn algebra(&self, name: &str) -> Result<&LieAlgebra> {
        match self.get(name)? {
            Document::Algebra(a) => Ok(a),
            other => Err(Error::Invalid(format!("{name} is a {}", other.kind()))),
        }
    }

    pub fn semidirect(&self, name: &str) -> Result<&DiagonalSemidirectSpec> {
        match self.get(name)? {
            Document::Semidirect(s) => Ok(s),
            other => Err(Error::Invalid(format!("{name} is a {}", other.kind()))),
        }
    }

    pub fn extension(&self, name: &str) -> Result<NilExtSpec> {
        self.get(name)?
            .extension_spec()
            .unwrap_or_else(|| Err(Error::Invalid(format!("{name} is not an extension"))))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenReport {
    pub results: Vec<CriterionResult>,
}

impl GoldenReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failed(&self) -> Vec<&CriterionResult> {
        self.results.iter().filter(|r| !r.passed).collect()
    }

    /// One line per criterion. Timings are left out so the table is
    /// reproducible.
    pub fn table(&self) -> String {
        self.results
            .iter()
            .map(|r| {
                format!(
                    "{:>2}  {:<28} {}  {}\n",
                    r.id,
                    r.name,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.detail
                )
            })
            .collect()
    }
}

type Check = fn(&Bundle, Execution) -> Result<(bool, String)>;

/// `(id, name, runtime bound, check)`.
pub const CRITERIA: &[(usize, &str, Option<f64>, Check)] = &[
    (1, "ax+b golden", Some(1.0), axb_golden),
    (2, "codim3 golden", Some(1.0), codim3_golden),
    (3, "density sensitivity", None, density_sensitivity),
    (4, "coadjoint formula oracle", Some(10.0), formula_oracle),
    (5, "psi identity", None, psi_identity),
    (6, "fixed derived annihilator", None, derived_annihilator_fixed),
    (7, "affine confinement", None, affine_confinement),
    (8, "generic scan", None, generic_scan),
    (9, "codim-1 classifier", None, codim1_classifier),
    (10, "verdict consistency corpus", None, verdict_corpus),
];

pub fn run_golden(bundle: &Bundle, execution: Execution) -> GoldenReport {
    let results = CRITERIA
        .iter()
        .map(|&(id, name, bound, check)| run_one(id, name, bound, check, bundle, execution))
        .collect();
    GoldenReport { results }
}

pub fn run_criterion(id: usize, bundle: &Bundle, execution: Execution) -> Option<CriterionResult> {
    CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|&(id, name, bound, check)| run_one(id, name, bound, check, bundle, execution))
}

fn run_one(
    id: usize,
    name: &'static str,
    bound: Option<f64>,
    check: Check,
    bundle: &Bundle,
    execution: Execution,
) -> CriterionResult {
    let start = Instant::now();
    let outcome = check(bundle, execution);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = bound {
        if elapsed.as_secs_f64() >= limit {
            passed = false;
            detail.push_str(&format!("; exceeded {limit} s"));
        }
    }
    CriterionResult { id, name, passed, detail, elapsed }
}

fn axb_golden(b: &Bundle, _: Execution) -> Result<(bool, String)> {
    let spec = b.semidirect("axb.json")?;
    let d = classify_detailed(spec, &Point::real(spec, &[1]))?;
    let v = &d.verdict;
    let ok = v.facts.quasiorbit_open.is_true()
        && v.facts.is_single_orbit.is_true()
        && d.stabilizer.discrete_rank == 1
        && d.stabilizer.connected_dim == 0
        && (v.square_integrable, v.type_i, v.rule) == (Ternary::False, Ternary::True, Rule::R3);
    Ok((
        ok,
        format!(
            "quasiorbit_open={} single_orbit={} discrete_rank={} connected_dim={} SI={} typeI={} rule={}",
            v.facts.quasiorbit_open,
            v.facts.is_single_orbit,
            d.stabilizer.discrete_rank,
            d.stabilizer.connected_dim,
            v.square_integrable,
            v.type_i,
            v.rule
        ),
    ))
}

fn codim3_golden(b: &Bundle, _: Execution) -> Result<(bool, String)> {
    let spec = b.semidirect("codim3.json")?;
    let c = check_conditions_abc(spec);
    let two_n = two_n_greater_k_check(spec).unwrap_or(false);
    let d = classify_detailed(spec, &Point::real(spec, &[1, 1]))?;
    let v = &d.verdict;
    let ok = (spec.n(), spec.k()) == (2, 3)
        && c.all()
        && two_n
        && v.facts.quasiorbit_open.is_true()
        && d.stabilizer.a_connected_dim == 0
        && d.stabilizer.discrete_rank == 0
        && d.stabilizer.ker_theta_dim == 1
        && !d.warnings.is_empty()
        && (v.square_integrable, v.type_i, v.rule) == (Ternary::True, Ternary::False, Rule::R4);
    Ok((
        ok,
        format!(
            "abc={:?} 2n>k={} quasiorbit_open={} A(p)=({}, rank {}) ker_theta_dim={} SI={} typeI={} rule={} warnings={}",
            [c.a, c.b, c.c_injective, c.c_dense, c.c_proper],
            two_n,
            v.facts.quasiorbit_open,
            d.stabilizer.a_connected_dim,
            d.stabilizer.discrete_rank,
            d.stabilizer.ker_theta_dim,
            v.square_integrable,
            v.type_i,
            v.rule,
            d.warnings.len()
        ),
    ))
}

fn density_sensitivity(b: &Bundle, _: Execution) -> Result<(bool, String)> {
    let spec = b.semidirect("codim3.json")?;
    let one = BigRational::from_integer(BigInt::from(1));
    let rational = spec.substitute_theta(&one)?;
    let before = check_conditions_abc(spec).c_dense;
    let after = check_conditions_abc(&rational).c_dense;
    let relations = rational.phase_relations(&[0, 1]);
    let expected = vec![BigInt::from(1), BigInt::from(-1)];
    let verdict = classify(&rational, &Point::real(&rational, &[1, 1]))?;
    let flipped = verdict.rule == Rule::R1 || verdict.rule == Rule::Undetermined;
    let ok = before && !after && relations.basis == vec![expected] && flipped && !verdict.square_integrable.is_true();
    let rel: Vec<String> = relations.basis.iter().map(|m| format!("{m:?}")).collect();
    Ok((
        ok,
        format!(
            "c_dense {} -> {} relations=[{}] verdict SI={} rule={}",
            before,
            after,
            rel.join(" "),
            verdict.square_integrable,
            verdict.rule
        ),
    ))
}

const ORACLE_SPECS: [&str; 3] = ["h3_graded.json", "filiform4_graded.json", "h3_skew.json"];

fn formula_oracle(b: &Bundle, exec: Execution) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut trials = 0;
    for name in ORACLE_SPECS {
        let spec = b.extension(name)?;
        if spec.class() > 3 {
            return Ok((false, format!("{name} has class {}", spec.class())));
        }
        let r = oracle_check(&spec, 20, GOLDEN_SEED, DEFAULT_THETA, exec)?;
        worst = worst.max(r.max_formula_error).max(r.max_group_law_error);
        trials += r.trials;
    }
    Ok((worst < 1e-6 && trials >= 50, format!("{trials} samples on 3 specs, max |formula - oracle| = {worst:.2e}")))
}

fn psi_identity(b: &Bundle, exec: Execution) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for name in ORACLE_SPECS {
        let spec = b.extension(name)?;
        let n = spec.nil().dim();
        let errs = exec.map_range(20, |i| {
            let x = sample_rational_vector(n, &mut rng_for(GOLDEN_SEED + 5, i));
            psi_identity_error(&spec, &x, DEFAULT_THETA)
        });
        for e in errs {
            worst = worst.max(e?);
        }
    }
    Ok((worst < 1e-6, format!("20 samples per spec, max error = {worst:.2e}")))
}

/// `‖σ ∘ exp(t ad x) − σ‖_∞` for one sample.
pub fn derived_annihilator_drift(alg: &LieAlgebra, rng: &mut impl Rng, theta: f64) -> Result<f64> {
    let perp = alg.derived_ideal().annihilator();
    let mut sigma = vec![Scalar::zero(); alg.dim()];
    for b in perp.basis() {
        let c = Scalar::int(rng.random_range(-3..=3));
        for (s, v) in sigma.iter_mut().zip(b) {
            *s += &(&c * v);
        }
    }
    let x: Vec<Scalar> = (0..alg.dim()).map(|_| Scalar::int(rng.random_range(-2..=2))).collect();
    let ad = alg.ad(&x).evaluate(theta)?;
    let s = DVector::from_vec(evaluate_vec(&sigma, theta)?);
    let mut worst = 0.0f64;
    for t in [1.0, -1.0, 0.37, -0.37] {
        let moved: DVector<f64> = exp_matrix(&ad, t).transpose() * &s;
        worst = worst.max((moved - &s).amax());
    }
    Ok(worst)
}

fn derived_annihilator_fixed(_: &Bundle, exec: Execution) -> Result<(bool, String)> {
    let results = exec.map_range(10, |i| -> Result<(usize, f64)> {
        let mut rng = rng_for(GOLDEN_SEED + 6, i);
        let alg = random_solvable_algebra(&mut rng);
        let mut worst = 0.0f64;
        for _ in 0..10 {
            worst = worst.max(derived_annihilator_drift(&alg, &mut rng, DEFAULT_THETA)?);
        }
        Ok((alg.dim(), worst))
    });
    let mut worst = 0.0f64;
    let mut dims = Vec::new();
    for r in results {
        let (d, w) = r?;
        dims.push(d);
        worst = worst.max(w);
    }
    Ok((worst < 1e-9, format!("10 algebras (dims {dims:?}) x 10 pairs, max drift = {worst:.2e}")))
}

fn affine_confinement(b: &Bundle, exec: Execution) -> Result<(bool, String)> {
    let params = FlowParams { execution: exec, ..FlowParams::default() };
    let mut ok = true;
    let mut count = 0;
    for name in ["h3.json", "filiform4.json", "h3_plus_line.json"] {
        let alg = b.algebra(name)?;
        let center = alg.center();
        for i in 0..3 {
            let xi = sample_covector(alg.dim(), GOLDEN_SEED + 7, i);
            ok &= check_affine_confinement(alg, &xi, &center, &params)?;
            count += 1;
        }
    }
    Ok((ok, format!("{count} covectors on 3 algebras, tolerance 1e-9")))
}

fn generic_scan(b: &Bundle, exec: Execution) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, expected) in [("h3.json", 1), ("abelian3.json", 3), ("affine_line.json", 0)] {
        let alg = b.algebra(name)?;
        let start = Instant::now();
        let first = crate::coadjoint::generic_rank_scan_with(alg, 200, GOLDEN_SEED, exec)?;
        let elapsed = start.elapsed().as_secs_f64();
        let second = generic_rank_scan(alg, 200, GOLDEN_SEED)?;
        ok &= first.k0 == expected && first == second && first.samples_used <= 200 && elapsed < 1.0;
        parts.push(format!("k0({})={}", name.trim_end_matches(".json"), first.k0));
    }
    Ok((ok, parts.join(" ")))
}

fn codim1_classifier(b: &Bundle, exec: Execution) -> Result<(bool, String)> {
    let graded = codim1_classify(&b.extension("h3_graded.json")?, DEFAULT_THETA)?;
    let degenerate = codim1_classify(&b.extension("h3_degenerate.json")?, DEFAULT_THETA)?;
    let c = graded.conditions;
    let mut ok = c.trivial_center_g && c.flat_generic_n && c.center_dim_1 && graded.open_orbits_possible;
    ok &= degenerate.spectral_gate.gate == Gate::Fail && !degenerate.open_orbits_possible;

    let family = exec.map_range(40, |i| codim1_classify(&random_extension(&mut rng_for(GOLDEN_SEED + 9, i)), DEFAULT_THETA));
    let mut open = 0;
    for r in family {
        let r = r?;
        let v = &r.verdict;
        ok &= !v.square_integrable.is_true() || v.type_i.is_true();
        ok &= r.spectral_gate.gate != Gate::Fail || !r.open_orbits_possible;
        ok &= r.open_orbits_possible == (r.generic_stabilizer_dim == 0);
        ok &= v.invariant_violations().is_empty();
        open += r.open_orbits_possible as usize;
    }
    Ok((
        ok,
        format!(
            "h3 graded: open={} ; h3 diag(1,-1,0): gate={:?} open={} ; 40 random extensions, {} with open orbits",
            graded.open_orbits_possible, degenerate.spectral_gate.gate, degenerate.open_orbits_possible, open
        ),
    ))
}

/// Classifies one corpus entry and lists every broken invariant.
pub fn corpus_entry_problems(index: usize, seed: u64) -> Result<(Rule, Vec<String>)> {
    let mut rng = rng_for(seed, index);
    let spec = random_diagonal_spec(&mut rng);
    let point = random_point(&spec, &mut rng);
    let v = classify(&spec, &point)?;
    let mut problems = v.invariant_violations();
    if check_conditions_abc(&spec).all() && 2 * spec.n() <= spec.k() {
        problems.push("conditions hold but 2n <= k".into());
    }
    Ok((v.rule, problems))
}

fn verdict_corpus(_: &Bundle, exec: Execution) -> Result<(bool, String)> {
    let results = exec.map_range(500, |i| corpus_entry_problems(i, GOLDEN_SEED + 10));
    let mut bad = 0;
    let mut rules = std::collections::BTreeMap::<String, usize>::new();
    for r in results {
        let (rule, problems) = r?;
        *rules.entry(rule.to_string()).or_default() += 1;
        bad += !problems.is_empty() as usize;
    }
    let hist: Vec<String> = rules.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    Ok((bad == 0, format!("500 specs, {bad} violations, rules {}", hist.join(" "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_matches_built_in_examples() {
        let b = Bundle::embedded();
        assert_eq!(b.semidirect("axb.json").unwrap(), &DiagonalSemidirectSpec::complex_ax_plus_b());
        assert_eq!(b.semidirect("codim3.json").unwrap(), &DiagonalSemidirectSpec::codim3());
        assert_eq!(b.algebra("h3.json").unwrap(), &crate::algebra::standard::heisenberg());
        assert_eq!(b.extension("h3_graded.json").unwrap(), NilExtSpec::heisenberg_graded());
        assert!(!b.algebra("broken_jacobi.json").unwrap().validate().is_empty());
    }
}
