//! Integer points in subspaces of `ℝⁿ` defined over `ℚ(θ)`.
//!
//! A linear condition `Σ_j y_j(θ) m_j = 0` with `y_j ∈ ℚ(θ)` and integer
//! unknowns splits, after clearing denominators, into one rational condition
//! per power of `θ`: a polynomial in a transcendental vanishes only when
//! every coefficient does. The resulting rational system has a rational
//! kernel, and the integer points of a rational subspace form a lattice of
//! full rank in it. This decides Kronecker-type density questions exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::{Matrix, Subspace};
use crate::scalar::{Poly, Scalar};

/// Splits each `ℚ(θ)` row into rational rows, one per power of `θ`.
pub fn split_by_theta_degree(rows: &[Vec<Scalar>]) -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    for row in rows {
        let common = row
            .iter()
            .fold(Poly::one(), |acc, s| acc.mul_poly(s.denom()));
        let polys: Vec<Poly> = row
            .iter()
            .map(|s| s.numer().mul_poly(&common.div_rem(s.denom()).0))
            .collect();
        let max_deg = polys.iter().filter_map(Poly::degree).max();
        let Some(max_deg) = max_deg else { continue };
        for d in 0..=max_deg {
            let r: Vec<BigRational> = polys
                .iter()
                .map(|p| p.coeffs().get(d).cloned().unwrap_or_else(BigRational::zero))
                .collect();
            if r.iter().any(|c| !c.is_zero()) {
                out.push(r);
            }
        }
    }
    out
}

/// A sublattice of `ℤⁿ` given by a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    pub ambient: usize,
    pub basis: Vec<Vec<BigInt>>,
}

impl IntegerLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis_f64(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        self.basis
            .iter()
            .map(|v| v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

/// `ℤⁿ ∩ ker A` for a rational matrix `A`, with a basis of the full lattice
/// (not just of a finite-index sublattice).
pub fn integer_kernel(rows: &[Vec<BigRational>], n: usize) -> IntegerLattice {
    // Scale each row to integers.
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = r
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            r.iter()
                .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();

    // Column reduction A·U = [H | 0] with U unimodular; the columns of U
    // matching zero columns of A·U are a basis of the integer kernel.
    let mut a = int_rows;
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let col_op = |m: &mut Vec<Vec<BigInt>>, c1: usize, c2: usize, coeffs: [&BigInt; 4]| {
        // (col c1, col c2) <- (p*c1 + q*c2, r*c1 + s*c2)
        let [p, q, r, s] = coeffs;
        for row in m.iter_mut() {
            let x = row[c1].clone();
            let y = row[c2].clone();
            row[c1] = p * &x + q * &y;
            row[c2] = r * &x + s * &y;
        }
    };
    let mut pos = 0;
    for i in 0..a.len() {
        if pos == n {
            break;
        }
        for j in pos + 1..n {
            if a[i][j].is_zero() {
                continue;
            }
            let x = a[i][pos].clone();
            let y = a[i][j].clone();
            let eg = x.extended_gcd(&y);
            let g = eg.gcd;
            // [x y] · [[s, -y/g], [t, x/g]] = [g, 0]; determinant is 1.
            let minus_y_over_g = -(&y / &g);
            let x_over_g = &x / &g;
            let (s, t) = (eg.x, eg.y);
            col_op(&mut a, pos, j, [&s, &t, &minus_y_over_g, &x_over_g]);
            col_op(&mut u, pos, j, [&s, &t, &minus_y_over_g, &x_over_g]);
        }
        if !a[i][pos].is_zero() {
            pos += 1;
        }
    }
    let basis: Vec<Vec<BigInt>> = (pos..n)
        .map(|j| {
            let mut v: Vec<BigInt> = (0..n).map(|i| u[i][j].clone()).collect();
            normalize_sign(&mut v);
            v
        })
        .collect();
    IntegerLattice { ambient: n, basis }
}

fn normalize_sign(v: &mut [BigInt]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

/// `{m ∈ ℤⁿ : Σ_j m_j y_j = 0 for every row y}` with `θ` transcendental.
pub fn integer_relations(rows: &[Vec<Scalar>], n: usize) -> IntegerLattice {
    integer_kernel(&split_by_theta_degree(rows), n)
}

/// `ℤⁿ ∩ U` for a subspace `U ⊂ ℝⁿ` defined over `ℚ(θ)`.
pub fn integer_points(u: &Subspace) -> IntegerLattice {
    let perp = u.annihilator();
    integer_relations(perp.basis(), u.ambient())
}

/// Dimension of the largest rational subspace contained in `U`.
pub fn rational_dim(u: &Subspace) -> usize {
    let perp = u.annihilator();
    let split = split_by_theta_degree(perp.basis());
    if split.is_empty() {
        return u.ambient();
    }
    let m = Matrix::from_rows(
        u.ambient(),
        split
            .into_iter()
            .map(|r| r.into_iter().map(Scalar::rational).collect())
            .collect(),
    )
    .unwrap();
    u.ambient() - m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int_vec;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn theta_splitting_separates_degrees() {
        let t = Scalar::theta();
        let rows = vec![vec![Scalar::one(), t.clone()]];
        let split = split_by_theta_degree(&rows);
        assert_eq!(split, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        // 1/θ is cleared to a polynomial row first.
        let rows = vec![vec![Scalar::one(), Scalar::one() / t]];
        assert_eq!(split_by_theta_degree(&rows), vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
    }

    #[test]
    fn relations_of_irrational_pair_are_trivial() {
        let rows = vec![vec![Scalar::one(), Scalar::theta()]];
        assert!(integer_relations(&rows, 2).is_trivial());
        let rows = vec![int_vec(&[1, 1])];
        let lat = integer_relations(&rows, 2);
        assert_eq!(lat.rank(), 1);
        assert_eq!(lat.basis[0], vec![BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // 2x - 4y = 0 has integer kernel spanned by (2, 1), not (4, 2).
        let rows = vec![vec![q(2), q(-4)]];
        let lat = integer_kernel(&rows, 2);
        assert_eq!(lat.basis, vec![vec![BigInt::from(2), BigInt::from(1)]]);
        // 6x + 10y + 15z = 0: a rank-2 lattice of index 1.
        let lat = integer_kernel(&[vec![q(6), q(10), q(15)]], 3);
        assert_eq!(lat.rank(), 2);
        for v in &lat.basis {
            let s: BigInt = &v[0] * 6 + &v[1] * 10 + &v[2] * 15;
            assert!(s.is_zero());
        }
        // The 2x2 minors have gcd 1 exactly when the basis spans the full lattice.
        let (a, b) = (&lat.basis[0], &lat.basis[1]);
        let minors = [
            &a[0] * &b[1] - &a[1] * &b[0],
            &a[0] * &b[2] - &a[2] * &b[0],
            &a[1] * &b[2] - &a[2] * &b[1],
        ];
        let g = minors.iter().fold(BigInt::zero(), |acc, m| acc.gcd(m));
        assert!(g.is_one());
    }

    #[test]
    fn rational_dimension_of_lines() {
        let irr = Subspace::span(2, &[vec![Scalar::one(), Scalar::theta()]]);
        assert_eq!(rational_dim(&irr), 0);
        assert!(integer_points(&irr).is_trivial());
        let rat = Subspace::span(2, &[int_vec(&[1, 3])]);
        assert_eq!(rational_dim(&rat), 1);
        assert_eq!(integer_points(&rat).rank(), 1);
        assert_eq!(rational_dim(&Subspace::full(3)), 3);
        assert_eq!(rational_dim(&Subspace::zero(3)), 0);
    }
}
