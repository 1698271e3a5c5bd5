//! Does a matrix have eigenvalues on the imaginary axis (including 0)?
//!
//! Rational matrices are decided exactly: `χ(iy) = A(y) + iB(y)` with real
//! polynomials `A`, `B`, and a purely imaginary eigenvalue is a common real
//! root, i.e. a real root of `gcd(A, B)`, counted with a Sturm sequence.
//! Matrices involving `θ` are decided from floating-point eigenvalues.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::Matrix;
use crate::scalar::{Poly, Scalar};

/// `|Re λ|` at or below this counts as on the axis.
pub const AXIS_TOLERANCE: f64 = 1e-9;
/// `|Re λ|` below this (but above [`AXIS_TOLERANCE`]) is too close to call.
pub const INCONCLUSIVE_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gate {
    /// No eigenvalue on `iℝ`.
    Pass,
    /// Some eigenvalue on `iℝ`.
    Fail,
    /// Numeric eigenvalue too close to the axis to decide.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateResult {
    pub gate: Gate,
    pub method: Method,
}

/// Coefficients `c_0..=c_n` of `det(λI − A)` by Faddeev–LeVerrier.
pub fn characteristic_polynomial(a: &Matrix) -> Vec<Scalar> {
    let n = a.rows();
    assert!(a.is_square());
    let mut c = vec![Scalar::zero(); n + 1];
    c[n] = Scalar::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&Matrix::identity(n).scale(&c[n - k + 1]));
        let am = a.mul(&m);
        let trace: Scalar = (0..n).map(|i| am[(i, i)].clone()).sum();
        c[n - k] = -(trace * Scalar::ratio(1, k as i64));
    }
    c
}

/// Exact test for rational matrices; `None` if some entry involves `θ`.
pub fn has_imaginary_axis_eigenvalue_exact(a: &Matrix) -> Option<bool> {
    let chi: Vec<BigRational> = characteristic_polynomial(a)
        .iter()
        .map(Scalar::as_rational)
        .collect::<Option<_>>()?;
    let mut re = vec![BigRational::zero(); chi.len()];
    let mut im = vec![BigRational::zero(); chi.len()];
    for (k, c) in chi.iter().enumerate() {
        match k % 4 {
            0 => re[k] = c.clone(),
            1 => im[k] = c.clone(),
            2 => re[k] = -c.clone(),
            _ => im[k] = -c.clone(),
        }
    }
    let g = Poly::from_coeffs(re).gcd(&Poly::from_coeffs(im));
    Some(!g.is_constant() && g.count_real_roots() > 0)
}

/// Pass when no eigenvalue of `a` lies on `iℝ`.
pub fn imaginary_axis_gate(a: &Matrix, theta: f64) -> Result<GateResult> {
    if a.rows() == 0 {
        return Ok(GateResult { gate: Gate::Pass, method: Method::Exact });
    }
    if let Some(hit) = has_imaginary_axis_eigenvalue_exact(a) {
        let gate = if hit { Gate::Fail } else { Gate::Pass };
        return Ok(GateResult { gate, method: Method::Exact });
    }
    let m = a.evaluate(theta)?;
    let closest = m
        .complex_eigenvalues()
        .iter()
        .map(|l| l.re.abs())
        .fold(f64::INFINITY, f64::min);
    let gate = if closest <= AXIS_TOLERANCE {
        Gate::Fail
    } else if closest < INCONCLUSIVE_BAND {
        Gate::Inconclusive
    } else {
        Gate::Pass
    };
    Ok(GateResult { gate, method: Method::Numeric })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int_vec;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows[0].len(), rows.iter().map(|r| int_vec(r)).collect()).unwrap()
    }

    #[test]
    fn characteristic_polynomial_of_rotation() {
        let c = characteristic_polynomial(&m(&[&[0, -1], &[1, 0]]));
        assert_eq!(c, int_vec(&[1, 0, 1]));
        let c = characteristic_polynomial(&m(&[&[2, 1, 0], &[0, 3, 0], &[0, 0, -1]]));
        // (λ-2)(λ-3)(λ+1) = λ³ - 4λ² + λ + 6
        assert_eq!(c, int_vec(&[6, 1, -4, 1]));
    }

    #[test]
    fn exact_gate_examples() {
        let th = crate::DEFAULT_THETA;
        assert_eq!(imaginary_axis_gate(&m(&[&[1]]), th).unwrap().gate, Gate::Pass);
        assert_eq!(imaginary_axis_gate(&m(&[&[0]]), th).unwrap().gate, Gate::Fail);
        assert_eq!(imaginary_axis_gate(&m(&[&[0, -1], &[1, 0]]), th).unwrap().gate, Gate::Fail);
        // 1 ± 2i is off the axis.
        assert_eq!(imaginary_axis_gate(&m(&[&[1, -2], &[2, 1]]), th).unwrap().gate, Gate::Pass);
        // Nilpotent: eigenvalue 0.
        assert_eq!(imaginary_axis_gate(&m(&[&[0, 1], &[0, 0]]), th).unwrap().gate, Gate::Fail);
    }

    #[test]
    fn numeric_gate_with_theta() {
        let t = Scalar::theta();
        let rot = Matrix::from_rows(2, vec![vec![Scalar::zero(), -t.clone()], vec![t.clone(), Scalar::zero()]])
            .unwrap();
        let r = imaginary_axis_gate(&rot, crate::DEFAULT_THETA).unwrap();
        assert_eq!(r, GateResult { gate: Gate::Fail, method: Method::Numeric });
        let d = Matrix::diagonal(&[t, Scalar::one()]);
        assert_eq!(imaginary_axis_gate(&d, crate::DEFAULT_THETA).unwrap().gate, Gate::Pass);
    }
}
