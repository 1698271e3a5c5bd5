//! Finite-dimensional Lie algebras given by exact structure constants.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::bch::bch_series;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::numeric::exp_matrix;
use crate::scalar::Scalar;

/// A real Lie algebra with basis `e_0..e_{dim-1}` and brackets
/// `[e_i, e_j] = Σ_k c[i][j][k] e_k` over `ℚ(θ)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Scalar>,
}

/// A failed structural identity, with 0-based basis indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `c[i][j][k] + c[j][i][k] ≠ 0` (or `c[i][i][k] ≠ 0` when `i = j`).
    Antisymmetry { i: usize, j: usize, k: usize },
    /// The Jacobi sum over `(e_i, e_j, e_l)` has a nonzero `e_k` component.
    Jacobi { i: usize, j: usize, l: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { i, j, k } => {
                write!(f, "antisymmetry fails at ({i},{j},{k})")
            }
            Violation::Jacobi { i, j, l, k } => {
                write!(f, "Jacobi identity fails on ({i},{j},{l}) in component {k}")
            }
        }
    }
}

/// Parameters for summing a non-terminating operator series numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub order: usize,
    pub theta: f64,
}

/// Value of `ψ(ad x)`, exact when `ad x` is nilpotent.
#[derive(Debug, Clone, PartialEq)]
pub enum Psi {
    Exact(Matrix),
    Numeric(DMatrix<f64>),
}

impl Psi {
    pub fn to_numeric(&self, theta: f64) -> Result<DMatrix<f64>> {
        match self {
            Psi::Exact(m) => m.evaluate(theta),
            Psi::Numeric(m) => Ok(m.clone()),
        }
    }
}

impl LieAlgebra {
    /// The abelian algebra of dimension `dim` (all brackets zero).
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            c: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    /// Builds an algebra from the brackets `[e_i, e_j]` for the listed pairs.
    ///
    /// A pair `(i, j)` whose reverse `(j, i)` is not listed also sets
    /// `[e_j, e_i] = -[e_i, e_j]`. Listing both orders stores both verbatim.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<Scalar>)]) -> Result<Self> {
        let mut alg = LieAlgebra::abelian(dim);
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim {
                return Err(Error::Dimension(format!(
                    "bracket index ({i},{j}) out of range for dimension {dim}"
                )));
            }
            if coeffs.len() != dim {
                return Err(Error::Dimension(format!(
                    "bracket ({i},{j}) has {} coefficients (expected {dim})",
                    coeffs.len()
                )));
            }
            let reverse_listed = brackets.iter().any(|(a, b, _)| *a == j && *b == i);
            for (k, v) in coeffs.iter().enumerate() {
                alg.set(i, j, k, v.clone());
                if !reverse_listed && i != j {
                    alg.set(j, i, k, -v);
                }
            }
        }
        Ok(alg)
    }

    /// Builds an algebra from a full `dim³` table, stored verbatim.
    pub fn from_table(dim: usize, c: Vec<Scalar>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::Dimension(format!(
                "structure table has {} entries (expected {})",
                c.len(),
                dim * dim * dim
            )));
        }
        Ok(LieAlgebra { dim, c })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let d = self.dim;
        self.c[(i * d + j) * d + k] = v;
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Scalar] {
        let start = (i * self.dim + j) * self.dim;
        &self.c[start..start + self.dim]
    }

    /// Nonzero `(i, j)` pairs, in index order.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.basis_bracket(i, j).iter().any(|s| !s.is_zero()) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim;
        let mut out = vec![Scalar::zero(); d];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let b = self.basis_bracket(i, j);
                if b.iter().all(Scalar::is_zero) {
                    continue;
                }
                let w = xi * yj;
                for (o, c) in out.iter_mut().zip(b) {
                    if !c.is_zero() {
                        *o += &(&w * c);
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = Scalar::one();
        v
    }

    /// Reports every failure of antisymmetry and of the Jacobi identity.
    pub fn validate(&self) -> Vec<Violation> {
        let d = self.dim;
        let mut out = Vec::new();
        for i in 0..d {
            for j in i..d {
                for k in 0..d {
                    let a = self.structure_constant(i, j, k);
                    let b = self.structure_constant(j, i, k);
                    let bad = if i == j { !a.is_zero() } else { !(a + b).is_zero() };
                    if bad {
                        out.push(Violation::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                for l in j + 1..d {
                    let (ei, ej, el) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(l));
                    let t1 = self.bracket(&ei, &self.bracket(&ej, &el));
                    let t2 = self.bracket(&ej, &self.bracket(&el, &ei));
                    let t3 = self.bracket(&el, &self.bracket(&ei, &ej));
                    for k in 0..d {
                        if !(&(&t1[k] + &t2[k]) + &t3[k]).is_zero() {
                            out.push(Violation::Jacobi { i, j, l, k });
                        }
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad x`: column `j` holds `[x, e_j]`.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        let d = self.dim;
        let mut m = Matrix::zeros(d, d);
        for j in 0..d {
            let col = self.bracket(x, &self.basis_vector(j));
            for (k, v) in col.into_iter().enumerate() {
                m[(k, j)] = v;
            }
        }
        m
    }

    /// Matrix of `ad* x = -(ad x)ᵀ` acting on dual coordinates.
    pub fn ad_star(&self, x: &[Scalar]) -> Matrix {
        self.ad(x).transpose().scale(&Scalar::int(-1))
    }

    /// Center `{x : [x, y] = 0 for all y}`.
    pub fn center(&self) -> Subspace {
        let d = self.dim;
        // Row (j, k), column i: coefficient of e_k in [e_i, e_j].
        let m = Matrix::from_fn(d * d, d, |r, i| {
            let (j, k) = (r / d, r % d);
            self.structure_constant(i, j, k).clone()
        });
        m.kernel()
    }

    /// Derived ideal `[g, g]`.
    pub fn derived_ideal(&self) -> Subspace {
        let mut vs = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let b = self.basis_bracket(i, j);
                if b.iter().any(|s| !s.is_zero()) {
                    vs.push(b.to_vec());
                }
            }
        }
        Subspace::span(self.dim, &vs)
    }

    /// `[a, b]` for subspaces `a`, `b`.
    pub fn bracket_subspaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                vs.push(self.bracket(x, y));
            }
        }
        Subspace::span(self.dim, &vs)
    }

    /// `h^⊥ ⊂ g*` for a subspace `h ⊂ g`.
    pub fn annihilator(&self, h: &Subspace) -> Subspace {
        h.annihilator()
    }

    pub fn is_ideal(&self, h: &Subspace) -> bool {
        self.bracket_subspaces(&Subspace::full(self.dim), h)
            .is_subspace_of(h)
    }

    /// Lower central series `g = g¹ ⊇ g² ⊇ …`, stopping once it stabilizes.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.dim);
        let mut series = vec![full.clone()];
        loop {
            let next = self.bracket_subspaces(&full, series.last().unwrap());
            if next == *series.last().unwrap() {
                break;
            }
            let done = next.is_zero();
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    /// Smallest `c` with `g^{c+1} = 0`, or `None` if the algebra is not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        if self.dim == 0 {
            return Some(0);
        }
        let series = self.lower_central_series();
        series.last().unwrap().is_zero().then(|| series.len() - 1)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_class().is_some()
    }

    /// Derived series terminates in zero.
    pub fn is_solvable(&self) -> bool {
        let mut cur = Subspace::full(self.dim);
        loop {
            if cur.is_zero() {
                return true;
            }
            let next = self.bracket_subspaces(&cur, &cur);
            if next == cur {
                return false;
            }
            cur = next;
        }
    }

    /// `ψ(ad x) = -Σ_{k≥0} (ad x)^k / (k+1)!`.
    ///
    /// Exact when `ad x` is nilpotent. Otherwise `truncation` supplies the
    /// number of terms and the numeric value of `θ`.
    pub fn psi_of_ad(&self, x: &[Scalar], truncation: Option<Truncation>) -> Result<Psi> {
        let ad = self.ad(x);
        if let Some(index) = ad.nilpotency_index() {
            let d = self.dim;
            let mut term = Matrix::identity(d); // (ad x)^k / (k+1)!
            let mut sum = term.clone();
            for k in 1..index {
                term = term.mul(&ad).scale(&Scalar::ratio(1, (k + 1) as i64));
                sum = sum.add(&term);
            }
            return Ok(Psi::Exact(sum.scale(&Scalar::int(-1))));
        }
        let t = truncation.ok_or(Error::SeriesRequiresTruncation)?;
        let a = ad.evaluate(t.theta)?;
        let d = self.dim;
        let mut term = DMatrix::<f64>::identity(d, d);
        let mut sum = term.clone();
        for k in 1..t.order {
            term = &term * &a / (k + 1) as f64;
            sum += &term;
        }
        Ok(Psi::Numeric(-sum))
    }

    /// BCH product `x · y` with `exp(x · y) = exp x exp y`, exact.
    pub fn bch_product(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        let class = self.nilpotency_class().ok_or(Error::NotNilpotent)?;
        Ok(bch_series(|a, b| self.bracket(a, b), x, y, class))
    }

    /// Floating-point copy of the structure constants at `θ = theta`.
    pub fn evaluate(&self, theta: f64) -> Result<NumericAlgebra> {
        let c = self
            .c
            .iter()
            .map(|s| s.evaluate(theta))
            .collect::<Result<Vec<_>>>()?;
        Ok(NumericAlgebra { dim: self.dim, c })
    }

    /// `exp(t ad x)` evaluated at `θ = theta`.
    pub fn exp_ad(&self, x: &[Scalar], t: f64, theta: f64) -> Result<DMatrix<f64>> {
        Ok(exp_matrix(&self.ad(x).evaluate(theta)?, t))
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra(dim {}) {{", self.dim)?;
        for (i, j) in self.nonzero_brackets() {
            if i < j {
                write!(f, " [e{i},e{j}]={:?}", self.basis_bracket(i, j))?;
            }
        }
        write!(f, " }}")
    }
}

/// Structure constants evaluated in floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericAlgebra {
    dim: usize,
    c: Vec<f64>,
}

impl NumericAlgebra {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0.0 {
                    continue;
                }
                let start = (i * d + j) * d;
                for (k, o) in out.iter_mut().enumerate() {
                    *o += xi * yj * self.c[start + k];
                }
            }
        }
        out
    }

    pub fn ad(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.dim;
        let mut m = DMatrix::zeros(d, d);
        for j in 0..d {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            for (k, v) in self.bracket(x, &e).into_iter().enumerate() {
                m[(k, j)] = v;
            }
        }
        m
    }

    /// Floating-point BCH product truncated at `class`.
    pub fn bch_product(&self, x: &[f64], y: &[f64], class: usize) -> Vec<f64> {
        bch_series(|a, b| self.bracket(a, b), x, y, class)
    }
}

/// Small algebras used throughout the tests and bundled examples.
pub mod standard {
    use super::LieAlgebra;
    use crate::scalar::{int_vec, Scalar};

    fn unit(dim: usize, k: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); dim];
        v[k] = Scalar::one();
        v
    }

    /// Heisenberg algebra `h₃`: basis `X, Y, Z` with `[X, Y] = Z`.
    pub fn heisenberg() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(0, 1, unit(3, 2))]).unwrap()
    }

    /// Two-dimensional non-abelian algebra `[X, Y] = Y`.
    pub fn affine_line() -> LieAlgebra {
        LieAlgebra::from_brackets(2, &[(0, 1, unit(2, 1))]).unwrap()
    }

    /// Four-dimensional filiform algebra `[X, Y₁] = Y₂`, `[X, Y₂] = Y₃`.
    pub fn filiform4() -> LieAlgebra {
        LieAlgebra::from_brackets(4, &[(0, 1, unit(4, 2)), (0, 2, unit(4, 3))]).unwrap()
    }

    /// `h₃ ⊕ ℝ`.
    pub fn heisenberg_plus_line() -> LieAlgebra {
        LieAlgebra::from_brackets(4, &[(0, 1, unit(4, 2))]).unwrap()
    }

    /// Strictly upper triangular `n × n` matrices, basis `E_ij` (`i < j`) in
    /// row-major order. Nilpotency class `n - 1`.
    pub fn strictly_upper_triangular(n: usize) -> LieAlgebra {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let dim = pairs.len();
        let index = |p: (usize, usize)| pairs.iter().position(|&q| q == p);
        let mut brackets = Vec::new();
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                if a >= b {
                    continue;
                }
                // [E_ij, E_kl] = δ_jk E_il − δ_li E_kj
                let mut v = vec![Scalar::zero(); dim];
                if j == k {
                    v[index((i, l)).unwrap()] += &Scalar::one();
                }
                if l == i {
                    v[index((k, j)).unwrap()] -= &Scalar::one();
                }
                if v.iter().any(|s| !s.is_zero()) {
                    brackets.push((a, b, v));
                }
            }
        }
        LieAlgebra::from_brackets(dim, &brackets).unwrap()
    }

    /// `h₃` with the antisymmetry of `[X, Y]` deliberately broken.
    pub fn broken_heisenberg() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(0, 1, int_vec(&[0, 0, 1])), (1, 0, int_vec(&[0, 0, 1]))]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;
    use crate::scalar::int_vec;

    #[test]
    fn validate_examples() {
        assert!(LieAlgebra::abelian(3).validate().is_empty());
        assert!(heisenberg().validate().is_empty());
        assert!(filiform4().validate().is_empty());
        assert!(strictly_upper_triangular(4).validate().is_empty());
        assert_eq!(
            broken_heisenberg().validate(),
            vec![Violation::Antisymmetry { i: 0, j: 1, k: 2 }]
        );
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // [e0,e1]=e1, [e0,e2]=e2, [e1,e2]=e0 is not a Lie algebra.
        let alg = LieAlgebra::from_brackets(
            3,
            &[(0, 1, int_vec(&[0, 1, 0])), (0, 2, int_vec(&[0, 0, 1])), (1, 2, int_vec(&[1, 0, 0]))],
        )
        .unwrap();
        let v = alg.validate();
        assert!(!v.is_empty());
        assert!(v.iter().all(|x| matches!(x, Violation::Jacobi { i: 0, j: 1, l: 2, .. })));
    }

    #[test]
    fn centers() {
        assert_eq!(LieAlgebra::abelian(3).center(), Subspace::full(3));
        assert_eq!(heisenberg().center(), Subspace::span(3, &[int_vec(&[0, 0, 1])]));
        assert_eq!(affine_line().center(), Subspace::zero(2));
    }

    #[test]
    fn derived_ideals() {
        assert_eq!(LieAlgebra::abelian(3).derived_ideal(), Subspace::zero(3));
        assert_eq!(heisenberg().derived_ideal(), Subspace::span(3, &[int_vec(&[0, 0, 1])]));
        assert_eq!(affine_line().derived_ideal(), Subspace::span(2, &[int_vec(&[0, 1])]));
    }

    #[test]
    fn annihilator_examples() {
        let h = heisenberg();
        assert_eq!(h.annihilator(&Subspace::zero(3)), Subspace::full(3));
        assert_eq!(h.annihilator(&Subspace::full(3)), Subspace::zero(3));
        assert_eq!(
            h.annihilator(&h.center()),
            Subspace::span(3, &[int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])])
        );
    }

    #[test]
    fn ad_of_x_in_heisenberg() {
        let h = heisenberg();
        let m = h.ad(&int_vec(&[1, 0, 0]));
        let mut expected = Matrix::zeros(3, 3);
        expected[(2, 1)] = Scalar::one();
        assert_eq!(m, expected);
        assert!(h.ad(&int_vec(&[0, 0, 5])).is_zero());
    }

    #[test]
    fn ad_star_duality() {
        let alg = strictly_upper_triangular(4);
        let x: Vec<Scalar> = (0..6).map(|i| Scalar::ratio(i as i64 - 2, 3)).collect();
        let y: Vec<Scalar> = (0..6).map(|i| Scalar::int((i * i) as i64 % 5 - 1)).collect();
        let xi: Vec<Scalar> = (0..6).map(|i| Scalar::int(2 * i as i64 - 3) + Scalar::theta()).collect();
        let lhs = crate::scalar::dot(&alg.ad_star(&x).mul_vec(&xi), &y);
        let rhs = crate::scalar::dot(&xi, &alg.bracket(&x, &y));
        assert!((lhs + rhs).is_zero());
    }

    #[test]
    fn psi_examples() {
        let h = heisenberg();
        let Psi::Exact(p0) = h.psi_of_ad(&int_vec(&[0, 0, 0]), None).unwrap() else { panic!() };
        assert_eq!(p0, Matrix::identity(3).scale(&Scalar::int(-1)));

        let x = int_vec(&[1, 0, 0]);
        let Psi::Exact(p) = h.psi_of_ad(&x, None).unwrap() else { panic!() };
        let expected = Matrix::identity(3)
            .scale(&Scalar::int(-1))
            .sub(&h.ad(&x).scale(&Scalar::ratio(1, 2)));
        assert_eq!(p, expected);

        let f = filiform4();
        let x = int_vec(&[1, 0, 0, 0]);
        let ad = f.ad(&x);
        let Psi::Exact(p) = f.psi_of_ad(&x, None).unwrap() else { panic!() };
        let expected = Matrix::identity(4)
            .scale(&Scalar::int(-1))
            .sub(&ad.scale(&Scalar::ratio(1, 2)))
            .sub(&ad.mul(&ad).scale(&Scalar::ratio(1, 6)));
        assert_eq!(p, expected);
    }

    #[test]
    fn psi_requires_truncation_for_non_nilpotent() {
        let a = affine_line();
        let x = int_vec(&[1, 0]);
        assert_eq!(a.psi_of_ad(&x, None).unwrap_err(), Error::SeriesRequiresTruncation);
        let Psi::Numeric(p) = a
            .psi_of_ad(&x, Some(Truncation { order: 30, theta: 1.0 }))
            .unwrap()
        else {
            panic!()
        };
        // ad X = diag(0, 1): ψ(1) = -(e - 1)
        assert!((p[(1, 1)] + (std::f64::consts::E - 1.0)).abs() < 1e-12);
        assert!((p[(0, 0)] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn nilpotency_classes() {
        assert_eq!(LieAlgebra::abelian(3).nilpotency_class(), Some(1));
        assert_eq!(heisenberg().nilpotency_class(), Some(2));
        assert_eq!(filiform4().nilpotency_class(), Some(3));
        assert_eq!(strictly_upper_triangular(5).nilpotency_class(), Some(4));
        assert_eq!(affine_line().nilpotency_class(), None);
        assert!(affine_line().is_solvable());
    }

    #[test]
    fn bch_examples() {
        let h = heisenberg();
        let x = int_vec(&[2, -1, 3]);
        let minus_x = int_vec(&[-2, 1, -3]);
        assert!(h.bch_product(&x, &minus_x).unwrap().iter().all(Scalar::is_zero));

        // class 2: x·y = x + y + ½[x,y]
        let y = vec![Scalar::ratio(1, 2), Scalar::theta(), Scalar::int(-1)];
        let xy = h.bch_product(&x, &y).unwrap();
        let half = h.bracket(&x, &y).iter().map(|s| s * &Scalar::ratio(1, 2)).collect::<Vec<_>>();
        let expected: Vec<Scalar> = (0..3).map(|i| &(&x[i] + &y[i]) + &half[i]).collect();
        assert_eq!(xy, expected);

        let (xx, yy) = (int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0]));
        let a = h.bch_product(&xx, &yy).unwrap();
        let b = h.bch_product(&yy, &xx).unwrap();
        let diff: Vec<Scalar> = a.iter().zip(&b).map(|(p, q)| p - q).collect();
        assert_eq!(diff, int_vec(&[0, 0, 1]));

        assert_eq!(
            affine_line().bch_product(&int_vec(&[1, 0]), &int_vec(&[0, 1])).unwrap_err(),
            Error::NotNilpotent
        );
    }
}
