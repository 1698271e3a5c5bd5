//! Floating-point helpers: the matrix exponential and small norms.

use nalgebra::DMatrix;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

// Padé [13/13] numerator coefficients.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn norm1(a: &DMatrix<f64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Maximum absolute entry.
pub fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `exp(t A)` by scaling and squaring with a degree-13 Padé approximant.
pub fn exp_matrix(a: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
    assert!(a.is_square(), "exp_matrix needs a square matrix");
    let n = a.nrows();
    let at = a * t;
    let ident = DMatrix::<f64>::identity(n, n);
    if n == 0 {
        return ident;
    }
    let norm = norm1(&at);
    if norm == 0.0 {
        return ident;
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = at / 2f64.powi(s);

    let b = &PADE13;
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]);
    let u = &scaled
        * (u_inner + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &ident * b[1]);
    let v_inner = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]);
    let v = v_inner + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &ident * b[0];

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is invertible for scaled arguments");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Exact `exp(A)` for nilpotent `A` as the finite sum `Σ A^k / k!`.
/// Returns `None` when `A` is not nilpotent.
pub fn exp_nilpotent(a: &Matrix) -> Option<Matrix> {
    let index = a.nilpotency_index()?;
    let n = a.rows();
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..index {
        term = term.mul(a).scale(&Scalar::ratio(1, k as i64));
        sum = sum.add(&term);
    }
    Some(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn exp_of_zero_is_identity() {
        let z = DMatrix::<f64>::zeros(3, 3);
        assert_eq!(exp_matrix(&z, 1.0), DMatrix::identity(3, 3));
    }

    #[test]
    fn rotation_generator_quarter_turn() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let e = exp_matrix(&a, FRAC_PI_2);
        let expected = DMatrix::from_row_slice(
            2,
            2,
            &[FRAC_PI_2.cos(), -FRAC_PI_2.sin(), FRAC_PI_2.sin(), FRAC_PI_2.cos()],
        );
        assert!(max_abs(&(e - expected)) < 1e-12);
    }

    #[test]
    fn jordan_block_truncates() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e = exp_matrix(&a, 1.0);
        assert!(max_abs(&(e - DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]))) < 1e-15);
    }

    #[test]
    fn large_diagonal_uses_squaring() {
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -2.0]);
        let e = exp_matrix(&a, 4.0);
        assert!(((e[(0, 0)] - 12f64.exp()) / 12f64.exp()).abs() < 1e-12);
        assert!(((e[(1, 1)] - (-8f64).exp()) / (-8f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_taylor_series_on_dense_matrix() {
        let a = DMatrix::from_row_slice(3, 3, &[0.3, -0.7, 0.1, 0.5, 0.2, -0.4, -0.6, 0.9, -0.1]);
        let mut sum = DMatrix::<f64>::identity(3, 3);
        let mut term = DMatrix::<f64>::identity(3, 3);
        for k in 1..40 {
            term = &term * &a / k as f64;
            sum += &term;
        }
        let e = exp_matrix(&a, 1.0);
        assert!(max_abs(&(e - sum)) < 1e-13);
    }

    #[test]
    fn exact_nilpotent_exponential() {
        use crate::scalar::int_vec;
        let a = Matrix::from_rows(3, vec![int_vec(&[0, 1, 0]), int_vec(&[0, 0, 1]), int_vec(&[0, 0, 0])]).unwrap();
        let e = exp_nilpotent(&a).unwrap();
        assert_eq!(e[(0, 2)], Scalar::ratio(1, 2));
        assert_eq!(e[(0, 1)], Scalar::one());
        assert!(exp_nilpotent(&Matrix::identity(2)).is_none());
    }
}
