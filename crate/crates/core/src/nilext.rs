//! Extensions `G = N ⋊_α ℝ` of a nilpotent group by a derivation `D`,
//! `α_t = e^{tD}`, with group law `(x,t)(y,s) = (x · α_t(y), t + s)` on
//! exponential coordinates of `N`.
//!
//! The coadjoint matrix is `M(x,t) = Ad_G(x,t)^T`, acting on coordinate
//! vectors of `𝔤* = 𝔫* ⊕ ℝ`:
//!
//! ```text
//!          ⎛ e^{tDᵀ} exp(ad x)ᵀ   0 ⎞
//! M(x,t) = ⎝ (ψ(ad x) D x)ᵀ       1 ⎠
//! ```
//!
//! so that `M(gh) = M(h) M(g)`. The oracle rebuilds `Ad_G` by differentiating
//! conjugation through BCH products.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{LieAlgebra, Psi};
use crate::coadjoint::{generic_rank_scan, nilpotent_flat_generic, DEFAULT_SAMPLES};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numeric::{exp_matrix, exp_nilpotent, max_abs};
use crate::par::Execution;
use crate::scalar::{evaluate_vec, Scalar};
use crate::spectrum::{imaginary_axis_gate, Gate, GateResult};
use crate::verdict::{Facts, Rule, Ternary, Verdict};

/// Largest nilpotency class the BCH oracle accepts.
pub const MAX_ORACLE_CLASS: usize = 4;
/// Central-difference step of the oracle.
pub const ORACLE_STEP: f64 = 1e-5;
/// Required agreement between formula and oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

pub const IMPLICATION: &str = "SI ⇒ type I in codimension 1";

/// A pair `(i, j)` of basis indices where `D[e_i, e_j] ≠ [De_i, e_j] + [e_i, De_j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationViolation {
    pub i: usize,
    pub j: usize,
}

/// Checks the derivation law on all pairs `i < j`. `D e_j` is column `j`.
pub fn validate_derivation(alg: &LieAlgebra, d: &Matrix) -> Vec<DerivationViolation> {
    let n = alg.dim();
    let cols: Vec<Vec<Scalar>> = (0..n).map(|j| d.column(j)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = d.mul_vec(alg.basis_bracket(i, j));
            let a = alg.bracket(&cols[i], &alg.basis_vector(j));
            let b = alg.bracket(&alg.basis_vector(i), &cols[j]);
            let ok = lhs
                .iter()
                .zip(a.iter().zip(&b))
                .all(|(l, (x, y))| (l - x - y).is_zero());
            if !ok {
                out.push(DerivationViolation { i, j });
            }
        }
    }
    out
}

/// Basis of `Der(𝔫)` as matrices.
pub fn derivation_space(alg: &LieAlgebra) -> Vec<Matrix> {
    let n = alg.dim();
    let u = |a: usize, b: usize| a * n + b;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let mut row = vec![Scalar::zero(); n * n];
                for m in 0..n {
                    let c = alg.structure_constant(i, j, m);
                    if !c.is_zero() {
                        row[u(k, m)] += c;
                    }
                }
                for a in 0..n {
                    let c = alg.structure_constant(a, j, k);
                    if !c.is_zero() {
                        row[u(a, i)] -= c;
                    }
                    let c = alg.structure_constant(i, a, k);
                    if !c.is_zero() {
                        row[u(a, j)] -= c;
                    }
                }
                if row.iter().any(|s| !s.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        crate::linalg::Subspace::full(n * n)
    } else {
        Matrix::from_rows(n * n, rows).unwrap().kernel()
    };
    kernel
        .basis()
        .iter()
        .map(|v| Matrix::from_fn(n, n, |a, b| v[u(a, b)].clone()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilExtSpec {
    nil: LieAlgebra,
    derivation: Matrix,
    class: usize,
}

impl NilExtSpec {
    pub fn new(nil: LieAlgebra, derivation: Matrix) -> Result<Self> {
        let n = nil.dim();
        if derivation.rows() != n || derivation.cols() != n {
            return Err(Error::Dimension(format!(
                "derivation is {}x{} on an algebra of dimension {}",
                derivation.rows(),
                derivation.cols(),
                n
            )));
        }
        let class = nil.nilpotency_class().ok_or(Error::NotNilpotent)?;
        let bad = validate_derivation(&nil, &derivation);
        if !bad.is_empty() {
            let pairs: Vec<String> = bad.iter().map(|v| format!("({},{})", v.i, v.j)).collect();
            return Err(Error::Invalid(format!("not a derivation at {}", pairs.join(", "))));
        }
        Ok(NilExtSpec { nil, derivation, class })
    }

    /// `h₃ ⋊ diag(1, 1, 2)`.
    pub fn heisenberg_graded() -> Self {
        let d = Matrix::diagonal(&crate::scalar::int_vec(&[1, 1, 2]));
        Self::new(crate::algebra::standard::heisenberg(), d).unwrap()
    }

    pub fn nil(&self) -> &LieAlgebra {
        &self.nil
    }

    pub fn derivation(&self) -> &Matrix {
        &self.derivation
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn dim(&self) -> usize {
        self.nil.dim() + 1
    }

    /// `𝔤 = 𝔫 ⋊_D ℝ` with the extra generator `T` last and `[T, y] = Dy`.
    pub fn semidirect_algebra(&self) -> LieAlgebra {
        let n = self.nil.dim();
        let mut brackets = Vec::new();
        for (i, j) in self.nil.nonzero_brackets() {
            if i < j {
                let mut v = self.nil.basis_bracket(i, j).to_vec();
                v.push(Scalar::zero());
                brackets.push((i, j, v));
            }
        }
        for j in 0..n {
            let mut v = self.derivation.column(j);
            if v.iter().all(Scalar::is_zero) {
                continue;
            }
            v.push(Scalar::zero());
            brackets.push((n, j, v));
        }
        LieAlgebra::from_brackets(n + 1, &brackets).expect("indices are in range")
    }

    /// `ψ(ad x) D x`, exact.
    pub fn psi_dx(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        match self.nil.psi_of_ad(x, None)? {
            Psi::Exact(p) => Ok(p.mul_vec(&self.derivation.mul_vec(x))),
            Psi::Numeric(_) => unreachable!("ad x is nilpotent"),
        }
    }
}

/// `M(x, t)` from the closed formula.
pub fn coadjoint_matrix(spec: &NilExtSpec, x: &[Scalar], t: f64, theta: f64) -> Result<DMatrix<f64>> {
    let n = spec.nil.dim();
    if x.len() != n {
        return Err(Error::Dimension(format!("x has length {} but dim n = {}", x.len(), n)));
    }
    let ad_n = exp_nilpotent(&spec.nil.ad(x))
        .expect("ad x is nilpotent")
        .evaluate(theta)?;
    let etd = exp_matrix(&spec.derivation.evaluate(theta)?, t);
    let w = evaluate_vec(&spec.psi_dx(x)?, theta)?;
    let top = (ad_n * etd).transpose();
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m.view_mut((0, 0), (n, n)).copy_from(&top);
    for (j, wj) in w.iter().enumerate() {
        m[(n, j)] = *wj;
    }
    m[(n, n)] = 1.0;
    Ok(m)
}

/// Floating-point model of the group `N ⋊ ℝ`.
struct NumericGroup {
    alg: crate::algebra::NumericAlgebra,
    d: DMatrix<f64>,
    class: usize,
}

impl NumericGroup {
    fn new(spec: &NilExtSpec, theta: f64) -> Result<Self> {
        if spec.class > MAX_ORACLE_CLASS {
            return Err(Error::ClassTooLarge { class: spec.class, max: MAX_ORACLE_CLASS });
        }
        Ok(NumericGroup {
            alg: spec.nil.evaluate(theta)?,
            d: spec.derivation.evaluate(theta)?,
            class: spec.class,
        })
    }

    fn alpha(&self, t: f64, y: &[f64]) -> Vec<f64> {
        let v = exp_matrix(&self.d, t) * nalgebra::DVector::from_column_slice(y);
        v.iter().copied().collect()
    }

    fn bch(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.alg.bch_product(x, y, self.class)
    }

    fn mul(&self, g: &(Vec<f64>, f64), h: &(Vec<f64>, f64)) -> (Vec<f64>, f64) {
        (self.bch(&g.0, &self.alpha(g.1, &h.0)), g.1 + h.1)
    }

    fn inverse(&self, g: &(Vec<f64>, f64)) -> (Vec<f64>, f64) {
        let neg: Vec<f64> = g.0.iter().map(|v| -v).collect();
        (self.alpha(-g.1, &neg), -g.1)
    }

    /// `g h g⁻¹` flattened to `(y, s)`.
    fn conjugate(&self, g: &(Vec<f64>, f64), h: &(Vec<f64>, f64)) -> Vec<f64> {
        let (y, s) = self.mul(&self.mul(g, h), &self.inverse(g));
        let mut out = y;
        out.push(s);
        out
    }
}

/// `M(x, t)` rebuilt from conjugation in the group by central differences.
pub fn coadjoint_oracle(spec: &NilExtSpec, x: &[Scalar], t: f64, theta: f64) -> Result<DMatrix<f64>> {
    let group = NumericGroup::new(spec, theta)?;
    let n = spec.nil.dim();
    let g = (evaluate_vec(x, theta)?, t);
    let h = ORACLE_STEP;
    let mut ad = DMatrix::zeros(n + 1, n + 1);
    for j in 0..=n {
        let probe = |eps: f64| {
            let mut y = vec![0.0; n];
            let mut s = 0.0;
            if j < n {
                y[j] = eps;
            } else {
                s = eps;
            }
            group.conjugate(&g, &(y, s))
        };
        let (plus, minus) = (probe(h), probe(-h));
        for i in 0..=n {
            ad[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    Ok(ad.transpose())
}

/// `max |d/ds|₀ (x · e^{sD}(−x)) − ψ(ad x) D x|`.
pub fn psi_identity_error(spec: &NilExtSpec, x: &[Scalar], theta: f64) -> Result<f64> {
    let group = NumericGroup::new(spec, theta)?;
    let xn = evaluate_vec(x, theta)?;
    let neg: Vec<f64> = xn.iter().map(|v| -v).collect();
    let curve = |s: f64| group.bch(&xn, &group.alpha(s, &neg));
    let h = ORACLE_STEP;
    let (plus, minus) = (curve(h), curve(-h));
    let expected = evaluate_vec(&spec.psi_dx(x)?, theta)?;
    Ok((0..xn.len())
        .map(|i| ((plus[i] - minus[i]) / (2.0 * h) - expected[i]).abs())
        .fold(0.0, f64::max))
}

/// `‖M(gh) − M(h) M(g)‖_∞` for the formula matrices.
pub fn group_law_error(
    spec: &NilExtSpec,
    g: (&[Scalar], f64),
    h: (&[Scalar], f64),
    theta: f64,
) -> Result<f64> {
    let group = NumericGroup::new(spec, theta)?;
    let gn = (evaluate_vec(g.0, theta)?, g.1);
    let hn = (evaluate_vec(h.0, theta)?, h.1);
    let (prod, t) = group.mul(&gn, &hn);
    let m_prod = coadjoint_matrix_numeric(spec, &prod, t, theta)?;
    let m_g = coadjoint_matrix(spec, g.0, g.1, theta)?;
    let m_h = coadjoint_matrix(spec, h.0, h.1, theta)?;
    Ok(max_abs(&(m_prod - m_h * m_g)))
}

/// The closed formula at a floating-point `x`.
pub fn coadjoint_matrix_numeric(spec: &NilExtSpec, x: &[f64], t: f64, theta: f64) -> Result<DMatrix<f64>> {
    let n = spec.nil.dim();
    let alg = spec.nil.evaluate(theta)?;
    let d = spec.derivation.evaluate(theta)?;
    let ad = alg.ad(x);
    // ψ(ad x) = −Σ_k (ad x)^k/(k+1)!, a finite sum since ad x is nilpotent.
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut psi = term.clone();
    for k in 1..=n {
        term = &term * &ad / (k + 1) as f64;
        psi += &term;
    }
    let w = -(psi * (&d * nalgebra::DVector::from_column_slice(x)));
    let top = (exp_matrix(&ad, 1.0) * exp_matrix(&d, t)).transpose();
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m.view_mut((0, 0), (n, n)).copy_from(&top);
    for j in 0..n {
        m[(n, j)] = w[j];
    }
    m[(n, n)] = 1.0;
    Ok(m)
}

/// A random rational vector with small numerators and denominators.
pub fn sample_rational_vector(dim: usize, rng: &mut impl Rng) -> Vec<Scalar> {
    (0..dim)
        .map(|_| Scalar::ratio(rng.random_range(-6..=6), rng.random_range(1..=4)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub trials: usize,
    pub max_formula_error: f64,
    pub max_psi_error: f64,
    pub max_group_law_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares formula and oracle at `trials` random `(x, t)`, `t ∈ [−1, 1]`.
pub fn oracle_check(
    spec: &NilExtSpec,
    trials: usize,
    seed: u64,
    theta: f64,
    execution: Execution,
) -> Result<OracleReport> {
    let n = spec.nil.dim();
    let errors = execution.map_range(trials, |i| -> Result<(f64, f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let x = sample_rational_vector(n, &mut rng);
        let t = rng.random_range(-1.0..=1.0);
        let y = sample_rational_vector(n, &mut rng);
        let s = rng.random_range(-1.0..=1.0);
        let formula = coadjoint_matrix(spec, &x, t, theta)?;
        let oracle = coadjoint_oracle(spec, &x, t, theta)?;
        Ok((
            max_abs(&(formula - oracle)),
            psi_identity_error(spec, &x, theta)?,
            group_law_error(spec, (&x, t), (&y, s), theta)?,
        ))
    });
    let mut report = OracleReport {
        trials,
        max_formula_error: 0.0,
        max_psi_error: 0.0,
        max_group_law_error: 0.0,
        tolerance: ORACLE_TOLERANCE,
        passed: false,
    };
    for e in errors {
        let (f, p, g) = e?;
        report.max_formula_error = report.max_formula_error.max(f);
        report.max_psi_error = report.max_psi_error.max(p);
        report.max_group_law_error = report.max_group_law_error.max(g);
    }
    report.passed = report.max_formula_error < ORACLE_TOLERANCE
        && report.max_psi_error < ORACLE_TOLERANCE
        && report.max_group_law_error < 1e-8;
    Ok(report)
}

/// Matrix of `D` restricted to the center of `𝔫`, in the center's echelon
/// basis.
pub fn central_restriction(spec: &NilExtSpec) -> Matrix {
    let z = spec.nil.center();
    let basis = z.basis();
    // Echelon basis: coordinates of a center vector are its pivot entries.
    let pivots: Vec<usize> = basis
        .iter()
        .map(|b| b.iter().position(|s| !s.is_zero()).unwrap())
        .collect();
    let images: Vec<Vec<Scalar>> = basis.iter().map(|b| spec.derivation.mul_vec(b)).collect();
    Matrix::from_fn(basis.len(), basis.len(), |l, i| images[i][pivots[l]].clone())
}

/// Whether `D|_𝔷` avoids the imaginary axis.
pub fn central_spectrum_gate(spec: &NilExtSpec, theta: f64) -> Result<GateResult> {
    imaginary_axis_gate(&central_restriction(spec), theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codim1Conditions {
    #[serde(rename = "trivial_center_G")]
    pub trivial_center_g: bool,
    #[serde(rename = "flat_generic_N")]
    pub flat_generic_n: bool,
    pub center_dim_1: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Codim1Report {
    pub open_orbits_possible: bool,
    pub conditions: Codim1Conditions,
    pub spectral_gate: GateResult,
    /// `k₀` of `𝔤` from the generic scan; zero exactly when open orbits exist.
    pub generic_stabilizer_dim: usize,
    pub implication: String,
    pub verdict: Verdict,
    pub warnings: Vec<String>,
}

pub fn codim1_classify(spec: &NilExtSpec, theta: f64) -> Result<Codim1Report> {
    let g = spec.semidirect_algebra();
    let conditions = Codim1Conditions {
        trivial_center_g: g.center().is_zero(),
        flat_generic_n: nilpotent_flat_generic(&spec.nil)?,
        center_dim_1: spec.nil.center().dim() == 1,
    };
    let open = conditions.trivial_center_g && conditions.flat_generic_n && conditions.center_dim_1;
    let gate = central_spectrum_gate(spec, theta)?;
    let k0 = generic_rank_scan(&g, DEFAULT_SAMPLES, 0)?.k0;

    let mut warnings = Vec::new();
    if open && gate.gate != Gate::Pass {
        warnings.push(format!("spectral gate is {:?} although open orbits are predicted", gate.gate));
    }
    if open != (k0 == 0) {
        warnings.push(format!("generic stabilizer dimension {k0} disagrees with the orbit criterion"));
    }
    if gate.gate == Gate::Inconclusive {
        warnings.push("central spectrum is too close to the imaginary axis to decide".into());
    }

    // Open quasi-orbits are single orbits here, with stabilizers inside N
    // whose Lie algebra vanishes; so they are trivial.
    let verdict = if open {
        Verdict {
            square_integrable: Ternary::True,
            type_i: Ternary::True,
            rule: Rule::C1,
            facts: Facts {
                trivial_center: Ternary::True,
                quasiorbit_open: Ternary::True,
                is_single_orbit: Ternary::True,
                stabilizer_trivial: Ternary::True,
                stabilizer_connected: Ternary::True,
                density_ok: Ternary::Undetermined,
            },
            reasons: vec![],
        }
    } else {
        let mut reasons = Vec::new();
        if !conditions.trivial_center_g {
            reasons.push("G has nontrivial center".to_string());
        }
        if !conditions.flat_generic_n {
            reasons.push("generic coadjoint orbits of N are not flat".to_string());
        }
        if !conditions.center_dim_1 {
            reasons.push("center of N is not one-dimensional".to_string());
        }
        reasons.push("type I status is not decided without open orbits".into());
        Verdict {
            square_integrable: Ternary::False,
            type_i: Ternary::Undetermined,
            rule: Rule::C0,
            facts: Facts {
                trivial_center: conditions.trivial_center_g.into(),
                quasiorbit_open: Ternary::False,
                ..Facts::default()
            },
            reasons,
        }
    };
    Ok(Codim1Report {
        open_orbits_possible: open,
        conditions,
        spectral_gate: gate,
        generic_stabilizer_dim: k0,
        implication: IMPLICATION.to_string(),
        verdict,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::standard::{filiform4, heisenberg};
    use crate::scalar::int_vec;

    fn diag(v: &[i64]) -> Matrix {
        Matrix::diagonal(&int_vec(v))
    }

    #[test]
    fn derivation_law() {
        let h = heisenberg();
        assert!(validate_derivation(&h, &Matrix::zeros(3, 3)).is_empty());
        assert!(validate_derivation(&h, &diag(&[1, 1, 2])).is_empty());
        assert_eq!(validate_derivation(&h, &diag(&[1, 1, 1])), vec![DerivationViolation { i: 0, j: 1 }]);
        assert!(NilExtSpec::new(h, diag(&[1, 1, 1])).is_err());
    }

    #[test]
    fn derivations_of_heisenberg() {
        // Der(h₃) has dimension 6.
        let space = derivation_space(&heisenberg());
        assert_eq!(space.len(), 6);
        for d in &space {
            assert!(validate_derivation(&heisenberg(), d).is_empty());
        }
        assert_eq!(derivation_space(&LieAlgebra::abelian(2)).len(), 4);
    }

    #[test]
    fn formula_special_cases() {
        let s = NilExtSpec::heisenberg_graded();
        let th = crate::DEFAULT_THETA;
        let zero = vec![Scalar::zero(); 3];
        assert_eq!(coadjoint_matrix(&s, &zero, 0.0, th).unwrap(), DMatrix::identity(4, 4));
        let m = coadjoint_matrix(&s, &zero, 0.5, th).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            0.5f64.exp(),
            0.5f64.exp(),
            1f64.exp(),
            1.0,
        ]));
        assert!(max_abs(&(m - expected)) < 1e-14);
        // ψ(ad X) D X = −X.
        assert_eq!(s.psi_dx(&int_vec(&[1, 0, 0])).unwrap(), int_vec(&[-1, 0, 0]));
    }

    #[test]
    fn abelian_bottom_row_is_minus_dx() {
        let d = Matrix::from_rows(2, vec![int_vec(&[0, -1]), int_vec(&[1, 0])]).unwrap();
        let s = NilExtSpec::new(LieAlgebra::abelian(2), d.clone()).unwrap();
        let x = int_vec(&[3, -2]);
        let dx: Vec<Scalar> = d.mul_vec(&x).iter().map(|v| -v).collect();
        assert_eq!(s.psi_dx(&x).unwrap(), dx);
    }

    #[test]
    fn oracle_agrees_with_formula() {
        for s in [
            NilExtSpec::heisenberg_graded(),
            NilExtSpec::new(filiform4(), diag(&[1, 1, 2, 3])).unwrap(),
        ] {
            let r = oracle_check(&s, 8, 3, crate::DEFAULT_THETA, Execution::Sequential).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn gate_examples() {
        let th = crate::DEFAULT_THETA;
        let s = NilExtSpec::heisenberg_graded();
        assert_eq!(central_spectrum_gate(&s, th).unwrap().gate, Gate::Pass);
        let s = NilExtSpec::new(heisenberg(), diag(&[1, -1, 0])).unwrap();
        assert_eq!(central_spectrum_gate(&s, th).unwrap().gate, Gate::Fail);
    }

    #[test]
    fn codim1_examples() {
        let th = crate::DEFAULT_THETA;
        let r = codim1_classify(&NilExtSpec::heisenberg_graded(), th).unwrap();
        assert!(r.open_orbits_possible);
        assert_eq!(r.conditions, Codim1Conditions { trivial_center_g: true, flat_generic_n: true, center_dim_1: true });
        assert_eq!(r.generic_stabilizer_dim, 0);
        assert_eq!(r.verdict.rule, Rule::C1);
        assert!(r.warnings.is_empty());

        let r = codim1_classify(&NilExtSpec::new(heisenberg(), diag(&[1, -1, 0])).unwrap(), th).unwrap();
        assert!(!r.open_orbits_possible);
        assert!(!r.conditions.trivial_center_g);
        assert!(r.conditions.center_dim_1);
        assert_eq!(r.spectral_gate.gate, Gate::Fail);

        let r = codim1_classify(&NilExtSpec::new(LieAlgebra::abelian(2), diag(&[1, 1])).unwrap(), th).unwrap();
        assert!(r.conditions.flat_generic_n && !r.conditions.center_dim_1);
        assert!(!r.open_orbits_possible);
        assert_eq!(r.verdict.rule, Rule::C0);
    }
}
