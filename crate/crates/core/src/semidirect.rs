//! Groups `G = V ⋊_α A` with `V = ℂⁿ`, `A = ℝᵏ` and diagonal action
//!
//! ```text
//! α(a) = diag(e^{⟨η_j, a⟩ + i⟨ξ_j, a⟩})_{j=1..n}.
//! ```
//!
//! `𝔤* = V* × 𝔞*` with `V*` identified with `ℂⁿ` through
//! `⟨p, v⟩ = Re Σ_j conj(p_j) v_j`. Real coordinates of `V` are interleaved:
//! `(re v_1, im v_1, re v_2, im v_2, …)`.
//!
//! Exact questions (ranks, kernels, integer relations) are answered over
//! `ℚ(θ)`; the group action itself involves exponentials and is numeric.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::lattice::{integer_relations, rational_dim, IntegerLattice};
use crate::linalg::{Matrix, Subspace};
use crate::par::Execution;
use crate::scalar::{dot, evaluate_vec, Scalar};
use crate::verdict::{Facts, Rule, Ternary, Verdict};

/// Tolerance on `m·δ / 2π` when matching phases in closure comparisons.
pub const PHASE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalSemidirectSpec {
    n: usize,
    k: usize,
    growth: Vec<Vec<Scalar>>,
    rotation: Vec<Vec<Scalar>>,
}

impl DiagonalSemidirectSpec {
    /// `growth[j] = η_j` and `rotation[j] = ξ_j`, each of length `k`.
    pub fn new(growth: Vec<Vec<Scalar>>, rotation: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = growth.len();
        if n == 0 {
            return Err(Error::Dimension("need at least one complex coordinate".into()));
        }
        if rotation.len() != n {
            return Err(Error::Dimension(format!(
                "{} growth vectors but {} rotation vectors",
                n,
                rotation.len()
            )));
        }
        let k = growth[0].len();
        if k == 0 {
            return Err(Error::Dimension("A must have positive dimension".into()));
        }
        for v in growth.iter().chain(&rotation) {
            if v.len() != k {
                return Err(Error::Dimension(format!(
                    "vector of length {} in a spec with k = {}",
                    v.len(),
                    k
                )));
            }
        }
        Ok(DiagonalSemidirectSpec { n, k, growth, rotation })
    }

    /// The complex `ax+b` group: `n = 1`, `k = 2`, `η = (1,0)`, `ξ = (0,1)`.
    pub fn complex_ax_plus_b() -> Self {
        Self::new(
            vec![vec![Scalar::one(), Scalar::zero()]],
            vec![vec![Scalar::zero(), Scalar::one()]],
        )
        .unwrap()
    }

    /// The 7-dimensional group with `η_j = e_j` and `ξ_1 = e_3`,
    /// `ξ_2 = θ e_3`.
    pub fn codim3() -> Self {
        Self::codim3_with(Scalar::theta())
    }

    /// [`Self::codim3`] with the frequency ratio `θ` replaced by `ratio`.
    pub fn codim3_with(ratio: Scalar) -> Self {
        let z = Scalar::zero;
        let o = Scalar::one;
        Self::new(
            vec![vec![o(), z(), z()], vec![z(), o(), z()]],
            vec![vec![z(), z(), o()], vec![z(), z(), ratio]],
        )
        .unwrap()
    }

    /// The spec with `θ` replaced by a rational value.
    pub fn substitute_theta(&self, value: &num_rational::BigRational) -> Result<Self> {
        let sub = |vs: &[Vec<Scalar>]| -> Result<Vec<Vec<Scalar>>> {
            vs.iter()
                .map(|v| v.iter().map(|s| s.substitute(value)).collect())
                .collect()
        };
        Self::new(sub(&self.growth)?, sub(&self.rotation)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn growth(&self) -> &[Vec<Scalar>] {
        &self.growth
    }

    pub fn rotation(&self) -> &[Vec<Scalar>] {
        &self.rotation
    }

    pub fn dim(&self) -> usize {
        2 * self.n + self.k
    }

    /// `dα(e_i)` as a real `2n × 2n` matrix.
    pub fn d_alpha(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(2 * self.n, 2 * self.n);
        for j in 0..self.n {
            let (eta, xi) = (&self.growth[j][i], &self.rotation[j][i]);
            m[(2 * j, 2 * j)] = eta.clone();
            m[(2 * j, 2 * j + 1)] = -xi;
            m[(2 * j + 1, 2 * j)] = xi.clone();
            m[(2 * j + 1, 2 * j + 1)] = eta.clone();
        }
        m
    }

    /// The Lie algebra `V ⋊ 𝔞`: basis `re_1, im_1, …, re_n, im_n, a_1, …, a_k`
    /// with `[a_i, v] = dα(e_i) v`.
    pub fn lie_algebra(&self) -> LieAlgebra {
        let dim = self.dim();
        let mut brackets = Vec::new();
        for i in 0..self.k {
            let d = self.d_alpha(i);
            for col in 0..2 * self.n {
                let mut out = vec![Scalar::zero(); dim];
                for row in 0..2 * self.n {
                    out[row] = d[(row, col)].clone();
                }
                if out.iter().any(|s| !s.is_zero()) {
                    brackets.push((2 * self.n + i, col, out));
                }
            }
        }
        LieAlgebra::from_brackets(dim, &brackets).expect("indices are in range")
    }

    fn growth_matrix(&self, rows: &[usize]) -> Matrix {
        Matrix::from_rows(self.k, rows.iter().map(|&j| self.growth[j].clone()).collect())
            .unwrap()
    }

    fn stacked_matrix(&self, rows: &[usize]) -> Matrix {
        let mut all: Vec<Vec<Scalar>> = rows.iter().map(|&j| self.growth[j].clone()).collect();
        all.extend(rows.iter().map(|&j| self.rotation[j].clone()));
        Matrix::from_rows(self.k, all).unwrap()
    }

    fn growth_rank(&self) -> usize {
        self.growth_matrix(&(0..self.n).collect::<Vec<_>>()).rank()
    }

    /// `W_J = {a : ⟨η_j, a⟩ = 0, j ∈ J}` and the image `U_J ⊂ ℝ^J` of
    /// `a ↦ (⟨ξ_j, a⟩)_{j∈J}` restricted to it.
    fn restricted_image(&self, support: &[usize]) -> (Subspace, Subspace) {
        let w = if support.is_empty() {
            Subspace::full(self.k)
        } else {
            self.growth_matrix(support).kernel()
        };
        let images: Vec<Vec<Scalar>> = w
            .basis()
            .iter()
            .map(|a| support.iter().map(|&j| dot(&self.rotation[j], a)).collect())
            .collect();
        (w, Subspace::span(support.len(), &images))
    }

    /// Integer vectors `m` with `Σ_j m_j ⟨ξ_j, a⟩ = 0` on `W_J`, over the
    /// support `J`.
    pub fn phase_relations(&self, support: &[usize]) -> IntegerLattice {
        let (_, u) = self.restricted_image(support);
        integer_relations(u.basis(), support.len())
    }

    pub fn evaluate(&self, theta: f64) -> Result<NumericSpec> {
        let ev = |vs: &[Vec<Scalar>]| -> Result<Vec<Vec<f64>>> {
            vs.iter().map(|v| evaluate_vec(v, theta)).collect()
        };
        Ok(NumericSpec { growth: ev(&self.growth)?, rotation: ev(&self.rotation)? })
    }
}

/// A complex number with `ℚ(θ)` parts.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ExactComplex {
    pub re: Scalar,
    pub im: Scalar,
}

impl ExactComplex {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        ExactComplex { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        ExactComplex { re, im: Scalar::zero() }
    }

    pub fn i() -> Self {
        ExactComplex { re: Scalar::zero(), im: Scalar::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn evaluate(&self, theta: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.re.evaluate(theta)?, self.im.evaluate(theta)?))
    }
}

/// Interleaved real coordinates of a complex vector.
pub fn to_real(v: &[ExactComplex]) -> Vec<Scalar> {
    v.iter().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()
}

pub fn from_real(v: &[Scalar]) -> Vec<ExactComplex> {
    v.chunks(2).map(|c| ExactComplex::new(c[0].clone(), c[1].clone())).collect()
}

/// A point `(p, ξ) ∈ V* × 𝔞*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    pub p: Vec<ExactComplex>,
    pub xi_a: Vec<Scalar>,
}

impl Point {
    pub fn new(p: Vec<ExactComplex>, xi_a: Vec<Scalar>) -> Self {
        Point { p, xi_a }
    }

    /// The point with real `p` and zero `𝔞*` part.
    pub fn real(spec: &DiagonalSemidirectSpec, p: &[i64]) -> Self {
        Point {
            p: p.iter().map(|&x| ExactComplex::real(Scalar::int(x))).collect(),
            xi_a: vec![Scalar::zero(); spec.k()],
        }
    }

    fn check(&self, spec: &DiagonalSemidirectSpec) -> Result<()> {
        if self.p.len() != spec.n() || self.xi_a.len() != spec.k() {
            return Err(Error::Dimension(format!(
                "point has shape ({}, {}) but the spec needs ({}, {})",
                self.p.len(),
                self.xi_a.len(),
                spec.n(),
                spec.k()
            )));
        }
        Ok(())
    }

    /// The same point as a covector on [`DiagonalSemidirectSpec::lie_algebra`].
    pub fn covector(&self) -> Vec<Scalar> {
        let mut out = to_real(&self.p);
        out.extend(self.xi_a.iter().cloned());
        out
    }

    pub fn evaluate(&self, theta: f64) -> Result<NumPoint> {
        Ok(NumPoint {
            p: self.p.iter().map(|z| z.evaluate(theta)).collect::<Result<_>>()?,
            xi: evaluate_vec(&self.xi_a, theta)?,
        })
    }
}

/// Which coordinates of `p` vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    Zero,
    Full,
    Mixed,
}

pub fn support_of(p: &[ExactComplex]) -> Support {
    let nonzero = p.iter().filter(|z| !z.is_zero()).count();
    if nonzero == 0 {
        Support::Zero
    } else if nonzero == p.len() {
        Support::Full
    } else {
        Support::Mixed
    }
}

fn support_indices(p: &[ExactComplex]) -> Vec<usize> {
    (0..p.len()).filter(|&j| !p[j].is_zero()).collect()
}

/// `θ_p(v) = Σ_r Im(conj(p_r) v_r) ξ_r − Re(conj(p_r) v_r) η_r`.
pub fn theta_p(spec: &DiagonalSemidirectSpec, p: &[ExactComplex], v: &[ExactComplex]) -> Vec<Scalar> {
    assert_eq!(p.len(), spec.n());
    assert_eq!(v.len(), spec.n());
    let mut out = vec![Scalar::zero(); spec.k()];
    for r in 0..spec.n() {
        let re = &p[r].re * &v[r].re + &p[r].im * &v[r].im;
        let im = &p[r].re * &v[r].im - &p[r].im * &v[r].re;
        if re.is_zero() && im.is_zero() {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o += &(&im * &spec.rotation[r][i] - &re * &spec.growth[r][i]);
        }
    }
    out
}

/// `θ_p(v)_i = −⟨p, dα(e_i) v⟩`, computed from the matrices `dα(e_i)`.
pub fn theta_p_general(
    spec: &DiagonalSemidirectSpec,
    p: &[ExactComplex],
    v: &[ExactComplex],
) -> Vec<Scalar> {
    let (pr, vr) = (to_real(p), to_real(v));
    (0..spec.k())
        .map(|i| -dot(&pr, &spec.d_alpha(i).mul_vec(&vr)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaMatrix {
    /// `k × 2n`; column `2r` is `θ_p(e_r)`, column `2r+1` is `θ_p(i e_r)`.
    pub matrix: Matrix,
    pub rank: usize,
    pub kernel: Subspace,
}

impl ThetaMatrix {
    pub fn is_surjective(&self) -> bool {
        self.rank == self.matrix.rows()
    }

    pub fn image(&self) -> Subspace {
        self.matrix.image()
    }
}

pub fn theta_matrix(spec: &DiagonalSemidirectSpec, p: &[ExactComplex]) -> ThetaMatrix {
    let n = spec.n();
    let mut columns = Vec::with_capacity(2 * n);
    for r in 0..n {
        for unit in [ExactComplex::real(Scalar::one()), ExactComplex::i()] {
            let mut v = vec![ExactComplex::default(); n];
            v[r] = unit;
            columns.push(theta_p(spec, p, &v));
        }
    }
    let matrix = Matrix::from_columns(spec.k(), &columns);
    ThetaMatrix { rank: matrix.rank(), kernel: matrix.kernel(), matrix }
}

/// Real rank of `a ↦ d/ds α*(sa)p` at `s = 0`; the orbit `α*(A)p` is open
/// in `V*` exactly when this is `2n`.
pub fn infinitesimal_rank(spec: &DiagonalSemidirectSpec, p: &[ExactComplex]) -> usize {
    let mut rows = Vec::with_capacity(2 * spec.n());
    for (j, pj) in p.iter().enumerate().take(spec.n()) {
        let (pr, pi) = (&pj.re, &pj.im);
        let (eta, xi) = (&spec.growth[j], &spec.rotation[j]);
        rows.push((0..spec.k()).map(|i| -(pr * &eta[i]) - pi * &xi[i]).collect());
        rows.push((0..spec.k()).map(|i| -(pi * &eta[i]) + pr * &xi[i]).collect());
    }
    Matrix::from_rows(spec.k(), rows).unwrap().rank()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub ker_theta_dim: usize,
    pub a_connected_dim: usize,
    pub connected_dim: usize,
    pub discrete_rank: usize,
}

impl StabilizerReport {
    pub fn is_trivial(&self) -> bool {
        self.connected_dim == 0 && self.discrete_rank == 0
    }

    pub fn is_connected(&self) -> bool {
        self.discrete_rank == 0
    }
}

/// Generators of the identity component of `G(p, ξ) = Ker θ_p ⋊ A(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerGenerators {
    /// Basis of `Ker θ_p` in interleaved real coordinates.
    pub kernel: Vec<Vec<Scalar>>,
    /// Basis of the Lie algebra of `A(p)`.
    pub a_connected: Vec<Vec<Scalar>>,
}

pub fn stabilizer_generators(spec: &DiagonalSemidirectSpec, p: &[ExactComplex]) -> StabilizerGenerators {
    let support = support_indices(p);
    let a_connected = if support.is_empty() {
        Subspace::full(spec.k())
    } else {
        spec.stacked_matrix(&support).kernel()
    };
    StabilizerGenerators {
        kernel: theta_matrix(spec, p).kernel.basis().to_vec(),
        a_connected: a_connected.basis().to_vec(),
    }
}

/// Dimensions of `G(p, ξ)`. It depends on `p` only; `xi` is checked for shape.
pub fn stabilizer_group(spec: &DiagonalSemidirectSpec, point: &Point) -> Result<StabilizerReport> {
    point.check(spec)?;
    let support = support_indices(&point.p);
    let ker_theta_dim = theta_matrix(spec, &point.p).kernel.dim();
    let a_connected_dim = if support.is_empty() {
        spec.k()
    } else {
        spec.k() - spec.stacked_matrix(&support).rank()
    };
    // A(p) = {a ∈ W_J : ⟨ξ_j, a⟩ ∈ 2πℤ}; modulo its identity component it is
    // the lattice 2πℤ^J ∩ U_J, whose rank is the rational dimension of U_J.
    let (_, u) = spec.restricted_image(&support);
    let discrete_rank = rational_dim(&u);
    Ok(StabilizerReport {
        ker_theta_dim,
        a_connected_dim,
        connected_dim: ker_theta_dim + a_connected_dim,
        discrete_rank,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditions {
    pub a: bool,
    pub b: bool,
    pub c_injective: bool,
    pub c_dense: bool,
    pub c_proper: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c_injective && self.c_dense && self.c_proper
    }
}

/// The spanning, independence and Kronecker conditions on `(η, ξ)`.
///
/// With `W = {η}^⊥` and `L(a) = (⟨ξ_j, a⟩)_j` on `W`, the map
/// `Ψ(a) = (e^{i⟨ξ_j, a⟩})_j` from `W` to the torus is injective with dense
/// proper image iff `L` is injective, `L(W)` meets `2πℤⁿ` only in `0`, no
/// nonzero integer vector annihilates `L(W)`, and `dim L(W) < n`.
pub fn check_conditions_abc(spec: &DiagonalSemidirectSpec) -> Conditions {
    let all: Vec<usize> = (0..spec.n()).collect();
    let a = spec.stacked_matrix(&all).rank() == spec.k();
    let b = spec.growth_rank() == spec.n();
    let (w, u) = spec.restricted_image(&all);
    let l_injective = u.dim() == w.dim();
    let c_injective = l_injective && rational_dim(&u) == 0;
    let c_dense = integer_relations(u.basis(), spec.n()).is_trivial();
    let c_proper = u.dim() < spec.n();
    Conditions { a, b, c_injective, c_dense, c_proper }
}

/// Checks `2n > k`, which the conditions force.
pub fn two_n_greater_k_check(spec: &DiagonalSemidirectSpec) -> Result<bool> {
    if !check_conditions_abc(spec).all() {
        return Err(Error::Precondition("conditions (a)-(c) do not all hold".into()));
    }
    Ok(2 * spec.n() > spec.k())
}

/// Whether the quasi-orbit of `(p, ξ)` is open in `𝔤*` (independent of `ξ`).
///
/// Decided for `p = 0` and for `p ∈ (ℂ^×)ⁿ` with independent `η`'s: moduli
/// then move transitively and the phases fill the torus fibre iff no integer
/// relation annihilates the rotation image of `{η}^⊥`.
pub fn quasiorbit_open(spec: &DiagonalSemidirectSpec, p: &[ExactComplex]) -> Ternary {
    match support_of(p) {
        Support::Zero => Ternary::False,
        Support::Mixed => Ternary::Undetermined,
        Support::Full => {
            if spec.growth_rank() < spec.n() {
                return Ternary::Undetermined;
            }
            let surjective = theta_matrix(spec, p).is_surjective();
            let dense = spec.phase_relations(&support_indices(p)).is_trivial();
            (surjective && dense).into()
        }
    }
}

/// Whether `(p, ξ)` and `(q, ζ)` have the same coadjoint orbit closure.
pub fn orbit_closure_equal(
    spec: &DiagonalSemidirectSpec,
    first: &Point,
    second: &Point,
    theta: f64,
) -> Result<Ternary> {
    first.check(spec)?;
    second.check(spec)?;
    if first == second {
        return Ok(Ternary::True);
    }
    let diff: Vec<Scalar> = first.xi_a.iter().zip(&second.xi_a).map(|(a, b)| a - b).collect();
    match (support_of(&first.p), support_of(&second.p)) {
        (Support::Mixed, _) | (_, Support::Mixed) => Ok(Ternary::Undetermined),
        (Support::Zero, Support::Zero) => Ok(diff.iter().all(Scalar::is_zero).into()),
        (Support::Zero, Support::Full) | (Support::Full, Support::Zero) => Ok(Ternary::False),
        (Support::Full, Support::Full) => {
            if spec.growth_rank() < spec.n() {
                return Ok(Ternary::Undetermined);
            }
            if !theta_matrix(spec, &first.p).image().contains(&diff) {
                return Ok(Ternary::False);
            }
            let relations = spec.phase_relations(&(0..spec.n()).collect::<Vec<_>>());
            if relations.is_trivial() {
                return Ok(Ternary::True);
            }
            phases_match(spec, first, second, &relations, theta).map(Ternary::from)
        }
    }
}

/// Moves `|p|` onto `|q|` with some `e ∈ span{η}` and tests whether the
/// remaining phase offset lies in the closure of `L(W) + 2πℤⁿ`, i.e. pairs
/// with every relation vector to a multiple of `2π`.
fn phases_match(
    spec: &DiagonalSemidirectSpec,
    first: &Point,
    second: &Point,
    relations: &IntegerLattice,
    theta: f64,
) -> Result<bool> {
    let num = spec.evaluate(theta)?;
    let p = first.evaluate(theta)?.p;
    let q = second.evaluate(theta)?.p;
    let n = spec.n();
    let s: Vec<f64> = (0..n).map(|j| (p[j].norm() / q[j].norm()).ln()).collect();
    // e = Σ c_i η_i with Gram(η) c = s.
    let gram = nalgebra::DMatrix::from_fn(n, n, |i, j| fdot(&num.growth[i], &num.growth[j]));
    let c = gram
        .lu()
        .solve(&nalgebra::DVector::from_vec(s))
        .ok_or_else(|| Error::Invalid("growth vectors are numerically dependent".into()))?;
    let e: Vec<f64> = (0..spec.k())
        .map(|i| (0..n).map(|r| c[r] * num.growth[r][i]).sum())
        .collect();
    let delta: Vec<f64> = (0..n)
        .map(|j| q[j].arg() - p[j].arg() - fdot(&num.rotation[j], &e))
        .collect();
    Ok(relations.basis_f64().iter().all(|m| {
        let turns = fdot(m, &delta) / std::f64::consts::TAU;
        (turns - turns.round()).abs() < PHASE_TOLERANCE
    }))
}

fn fdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Growth and rotation vectors evaluated at a value of `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSpec {
    pub growth: Vec<Vec<f64>>,
    pub rotation: Vec<Vec<f64>>,
}

impl NumericSpec {
    /// The diagonal entries of `α(a)`.
    pub fn multipliers(&self, a: &[f64]) -> Vec<Complex64> {
        self.growth
            .iter()
            .zip(&self.rotation)
            .map(|(eta, xi)| Complex64::new(fdot(eta, a), fdot(xi, a)).exp())
            .collect()
    }

    pub fn theta_p(&self, p: &[Complex64], v: &[Complex64]) -> Vec<f64> {
        let k = self.growth.first().map_or(0, Vec::len);
        let mut out = vec![0.0; k];
        for r in 0..p.len() {
            let z = p[r].conj() * v[r];
            for (i, o) in out.iter_mut().enumerate() {
                *o += z.im * self.rotation[r][i] - z.re * self.growth[r][i];
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumPoint {
    pub p: Vec<Complex64>,
    pub xi: Vec<f64>,
}

impl NumPoint {
    pub fn distance(&self, other: &NumPoint) -> f64 {
        let dp = self.p.iter().zip(&other.p).map(|(a, b)| (a - b).norm());
        let dx = self.xi.iter().zip(&other.xi).map(|(a, b)| (a - b).abs());
        dp.chain(dx).fold(0.0, f64::max)
    }
}

/// `(v, a) ∈ V ⋊ A` with product `(v, a)(w, b) = (v + α(a)w, a + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub v: Vec<Complex64>,
    pub a: Vec<f64>,
}

impl GroupElement {
    pub fn identity(spec: &DiagonalSemidirectSpec) -> Self {
        GroupElement { v: vec![Complex64::new(0.0, 0.0); spec.n()], a: vec![0.0; spec.k()] }
    }

    pub fn mul(&self, other: &GroupElement, spec: &NumericSpec) -> GroupElement {
        let m = spec.multipliers(&self.a);
        GroupElement {
            v: (0..self.v.len()).map(|j| self.v[j] + m[j] * other.v[j]).collect(),
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn inverse(&self, spec: &NumericSpec) -> GroupElement {
        let neg_a: Vec<f64> = self.a.iter().map(|x| -x).collect();
        let m = spec.multipliers(&neg_a);
        GroupElement { v: (0..self.v.len()).map(|j| -(m[j] * self.v[j])).collect(), a: neg_a }
    }
}

/// `Ad*(v, a)(p, ξ) = (α(a⁻¹)* p, ξ − θ_p(α(a⁻¹) v))`.
pub fn coadjoint_action(spec: &NumericSpec, g: &GroupElement, point: &NumPoint) -> NumPoint {
    // α(a⁻¹)* multiplies p_j by e^{−⟨η_j,a⟩ + i⟨ξ_j,a⟩} = conj of α(−a)_j.
    let neg_a: Vec<f64> = g.a.iter().map(|x| -x).collect();
    let m = spec.multipliers(&neg_a);
    let w: Vec<Complex64> = g.v.iter().zip(&m).map(|(v, m)| m * v).collect();
    let shift = spec.theta_p(&point.p, &w);
    NumPoint {
        p: point.p.iter().zip(&m).map(|(p, m)| m.conj() * p).collect(),
        xi: point.xi.iter().zip(&shift).map(|(x, s)| x - s).collect(),
    }
}

/// Verdict together with the data it was derived from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub conditions: Conditions,
    pub stabilizer: StabilizerReport,
    pub theta_rank: usize,
    pub warnings: Vec<String>,
}

pub fn classify(spec: &DiagonalSemidirectSpec, point: &Point) -> Result<Verdict> {
    Ok(classify_detailed(spec, point)?.verdict)
}

pub fn classify_detailed(spec: &DiagonalSemidirectSpec, point: &Point) -> Result<Classification> {
    point.check(spec)?;
    let p = &point.p;
    let conditions = check_conditions_abc(spec);
    let stabilizer = stabilizer_group(spec, point)?;
    let theta = theta_matrix(spec, p);
    let qo = quasiorbit_open(spec, p);
    let support = support_of(p);

    let is_single_orbit = match support {
        Support::Zero => Ternary::True,
        _ if qo.is_true() => {
            (theta.is_surjective() && infinitesimal_rank(spec, p) == 2 * spec.n()).into()
        }
        _ => Ternary::Undetermined,
    };
    let facts = Facts {
        trivial_center: conditions.a.into(),
        quasiorbit_open: qo,
        is_single_orbit,
        stabilizer_trivial: stabilizer.is_trivial().into(),
        stabilizer_connected: stabilizer.is_connected().into(),
        density_ok: conditions.c_dense.into(),
    };

    let mut reasons = Vec::new();
    let (si, ti, rule) = if facts.trivial_center.is_false() || qo.is_false() {
        (Ternary::False, Ternary::Undetermined, Rule::R1)
    } else if qo.is_true() {
        match (is_single_orbit.is_true(), stabilizer.is_trivial(), stabilizer.is_connected()) {
            (true, true, _) => (Ternary::True, Ternary::True, Rule::R2),
            (true, false, _) => (Ternary::False, Ternary::True, Rule::R3),
            (false, _, true) => (Ternary::True, Ternary::False, Rule::R4),
            (false, _, false) => {
                reasons.push(format!(
                    "open quasi-orbit that is not a single orbit, with a stabilizer of discrete rank {}",
                    stabilizer.discrete_rank
                ));
                (Ternary::Undetermined, Ternary::Undetermined, Rule::Undetermined)
            }
        }
    } else {
        if support == Support::Mixed {
            reasons.push("p has both zero and nonzero coordinates".into());
        }
        if !conditions.b {
            reasons.push("growth vectors are linearly dependent".into());
        }
        (Ternary::Undetermined, Ternary::Undetermined, Rule::Undetermined)
    };
    if rule == Rule::R1 {
        if facts.trivial_center.is_false() {
            reasons.push("G has nontrivial center".into());
        }
        if qo.is_false() {
            reasons.push("quasi-orbit is not open".into());
        }
        reasons.push("type I status is not decided for non-open quasi-orbits".into());
    }

    let mut warnings = Vec::new();
    if rule == Rule::R4 && stabilizer.ker_theta_dim > 0 {
        warnings.push(format!(
            "stabilizer G(p,xi) is connected of dimension {}, not trivial",
            stabilizer.ker_theta_dim
        ));
    }
    Ok(Classification {
        verdict: Verdict { square_integrable: si, type_i: ti, rule, facts, reasons },
        conditions,
        stabilizer,
        theta_rank: theta.rank,
        warnings,
    })
}

/// Classifies a batch of points, preserving order.
pub fn classify_batch(
    spec: &DiagonalSemidirectSpec,
    points: &[Point],
    execution: Execution,
) -> Vec<Result<Verdict>> {
    execution.map_range(points.len(), |i| classify(spec, &points[i]))
}
