//! Exact dense linear algebra over [`Scalar`] and canonical subspaces.

use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix of exact scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has length {} (expected {cols})",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        Matrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| crate::scalar::dot(self.row(i), v))
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Prefer a pivot that does not depend on θ; it keeps entries small.
            let candidates = (r..m.rows).filter(|&i| !m[(i, c)].is_zero());
            let pick = candidates
                .clone()
                .find(|&i| m[(i, c)].is_rational())
                .or_else(|| candidates.clone().next());
            let Some(p) = pick else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().unwrap();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &(&f * &m[(r, j)]);
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space `{x : A x = 0}` as a canonical subspace of `ℚ(θ)^cols`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors = free
            .iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(row, f)];
                }
                v
            })
            .collect::<Vec<_>>();
        Subspace::span(self.cols, &vectors)
    }

    /// Column space as a canonical subspace of `ℚ(θ)^rows`.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.rows, &self.transpose().to_rows())
    }

    /// Evaluates every entry at `theta`.
    pub fn evaluate(&self, theta: f64) -> Result<DMatrix<f64>> {
        let mut vals = Vec::with_capacity(self.data.len());
        for s in &self.data {
            vals.push(s.evaluate(theta)?);
        }
        Ok(DMatrix::from_row_slice(self.rows, self.cols, &vals))
    }

    /// True when some power of the (square) matrix vanishes.
    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_index().is_some()
    }

    /// Smallest `m` with `A^m = 0`, if any.
    pub fn nilpotency_index(&self) -> Option<usize> {
        assert!(self.is_square());
        let mut p = Matrix::identity(self.rows);
        for m in 1..=self.rows.max(1) {
            p = p.mul(self);
            if p.is_zero() {
                return Some(m);
            }
        }
        None
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Linear subspace of `ℚ(θ)^n`, stored as the nonzero rows of a reduced row
/// echelon form. Two subspaces are equal iff their stored bases are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient).to_rows(),
        }
    }

    /// Span of arbitrary (possibly dependent) vectors of length `ambient`.
    pub fn span(ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let m = Matrix::from_rows(ambient, vectors.to_vec()).expect("vector length mismatch");
        let (r, pivots) = m.rref();
        Subspace {
            ambient,
            basis: (0..pivots.len()).map(|i| r.row(i).to_vec()).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Subspace::span(self.ambient, &vs).dim() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.annihilator()
            .sum(&other.annihilator())
            .annihilator()
    }

    /// `{ξ : ⟨ξ, x⟩ = 0 for all x in self}` in dual coordinates.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient);
        }
        Matrix::from_rows(self.ambient, self.basis.clone())
            .unwrap()
            .kernel()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int_vec;

    #[test]
    fn rank_and_kernel_of_theta_matrix() {
        // [[-1, 0, 0, 0], [0, 0, -1, 0], [0, 1, 0, θ]]
        let t = Scalar::theta();
        let m = Matrix::from_rows(
            4,
            vec![
                int_vec(&[-1, 0, 0, 0]),
                int_vec(&[0, 0, -1, 0]),
                vec![Scalar::zero(), Scalar::one(), Scalar::zero(), t.clone()],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 3);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        assert!(m.mul_vec(&k.basis()[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn annihilator_is_an_involution() {
        let s = Subspace::span(4, &[int_vec(&[1, 2, 0, 1]), int_vec(&[0, 1, 1, 1])]);
        assert_eq!(s.annihilator().dim(), 2);
        assert_eq!(s.annihilator().annihilator(), s);
        assert_eq!(Subspace::zero(3).annihilator(), Subspace::full(3));
        assert_eq!(Subspace::full(3).annihilator(), Subspace::zero(3));
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let a = Subspace::span(3, &[int_vec(&[1, 1, 0]), int_vec(&[0, 1, 1])]);
        let b = Subspace::span(3, &[int_vec(&[1, 2, 1]), int_vec(&[1, 0, -1])]);
        assert_eq!(a, b);
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span(3, &[int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])]);
        let b = Subspace::span(3, &[int_vec(&[0, 1, 0]), int_vec(&[0, 0, 1])]);
        assert_eq!(a.intersection(&b), Subspace::span(3, &[int_vec(&[0, 1, 0])]));
    }

    #[test]
    fn nilpotency_index_of_jordan_block() {
        let n = Matrix::from_rows(3, vec![int_vec(&[0, 1, 0]), int_vec(&[0, 0, 1]), int_vec(&[0, 0, 0])]).unwrap();
        assert_eq!(n.nilpotency_index(), Some(3));
        assert_eq!(Matrix::identity(2).nilpotency_index(), None);
    }
}
