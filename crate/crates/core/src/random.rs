//! Seeded generators for test corpora and benchmarks.
//!
//! Every generator takes an explicit RNG; [`rng_for`] derives one
//! independent stream per `(seed, index)`, so batches can be built in
//! parallel without changing their contents.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{standard, LieAlgebra};
use crate::linalg::Matrix;
use crate::nilext::{derivation_space, NilExtSpec};
use crate::scalar::Scalar;
use crate::semidirect::{DiagonalSemidirectSpec, ExactComplex, Point};

pub fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// A small scalar: mostly integers, sometimes a rational or a multiple of `θ`.
pub fn small_scalar(rng: &mut impl Rng) -> Scalar {
    match rng.random_range(0..10) {
        0..=5 => Scalar::int(rng.random_range(-2..=2)),
        6 => Scalar::ratio(rng.random_range(-3..=3), rng.random_range(1..=3)),
        7 => Scalar::theta() * Scalar::int(rng.random_range(-2..=2)),
        8 => Scalar::theta() + Scalar::int(rng.random_range(-1..=1)),
        _ => Scalar::zero(),
    }
}

/// A subalgebra of upper triangular `3 × 3` matrices spanned by matrix
/// units, written in a random unimodular-times-diagonal basis. Solvable,
/// of dimension 1 to 6.
pub fn random_solvable_algebra(rng: &mut impl Rng) -> LieAlgebra {
    let all: Vec<(usize, usize)> = (0..3).flat_map(|i| (i..3).map(move |j| (i, j))).collect();
    let mut chosen: Vec<(usize, usize)> =
        all.iter().copied().filter(|_| rng.random_bool(0.6)).collect();
    if chosen.is_empty() {
        chosen.push(all[rng.random_range(0..all.len())]);
    }
    // Close under E_ij E_jl = E_il so the span is a subalgebra.
    loop {
        let mut added = false;
        for a in chosen.clone() {
            for b in chosen.clone() {
                if a.1 == b.0 && !chosen.contains(&(a.0, b.1)) {
                    chosen.push((a.0, b.1));
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    chosen.sort();
    let dim = chosen.len();
    let index = |p: (usize, usize)| chosen.iter().position(|&q| q == p);
    let mut brackets = Vec::new();
    for (a, &(i, j)) in chosen.iter().enumerate() {
        for (b, &(k, l)) in chosen.iter().enumerate().skip(a + 1) {
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
    let base = LieAlgebra::from_brackets(dim, &brackets).unwrap();
    change_basis(&base, &random_basis_change(dim, rng))
}

/// Permutation times unit upper triangular times a diagonal with entries
/// in `{1, 2, θ}`.
pub fn random_basis_change(dim: usize, rng: &mut impl Rng) -> Matrix {
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    let unit = Matrix::from_fn(dim, dim, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Scalar::one(),
        std::cmp::Ordering::Less => Scalar::int(rng.random_range(-1..=1)),
        std::cmp::Ordering::Greater => Scalar::zero(),
    });
    let diag: Vec<Scalar> = (0..dim)
        .map(|_| match rng.random_range(0..3) {
            0 => Scalar::one(),
            1 => Scalar::int(2),
            _ => Scalar::theta(),
        })
        .collect();
    let p = Matrix::from_fn(dim, dim, |i, j| if perm[j] == i { Scalar::one() } else { Scalar::zero() });
    p.mul(&unit).mul(&Matrix::diagonal(&diag))
}

/// Structure constants in the basis `f_a = Σ_i P[i][a] e_i`.
pub fn change_basis(alg: &LieAlgebra, p: &Matrix) -> LieAlgebra {
    let n = alg.dim();
    let inv = invert(p);
    let cols: Vec<Vec<Scalar>> = (0..n).map(|a| p.column(a)).collect();
    let mut brackets = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let v = inv.mul_vec(&alg.bracket(&cols[a], &cols[b]));
            if v.iter().any(|s| !s.is_zero()) {
                brackets.push((a, b, v));
            }
        }
    }
    LieAlgebra::from_brackets(n, &brackets).unwrap()
}

fn invert(p: &Matrix) -> Matrix {
    let n = p.rows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            p[(i, j)].clone()
        } else if j - n == i {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let (r, _) = aug.rref();
    Matrix::from_fn(n, n, |i, j| r[(i, j + n)].clone())
}

/// A diagonal semidirect spec with `n ≤ 3`, `k ≤ 5`.
pub fn random_diagonal_spec(rng: &mut impl Rng) -> DiagonalSemidirectSpec {
    let n = rng.random_range(1..=3);
    let k = rng.random_range(1..=5);
    // Half of the specs use coordinate growth vectors, which makes the
    // interesting regimes (b holds, Kronecker conditions vary) common.
    let structured = rng.random_bool(0.5) && k >= n;
    let growth = (0..n)
        .map(|j| {
            (0..k)
                .map(|i| {
                    if structured {
                        if i == j { Scalar::one() } else { Scalar::zero() }
                    } else {
                        small_scalar(rng)
                    }
                })
                .collect()
        })
        .collect();
    let rotation = (0..n)
        .map(|_| {
            (0..k)
                .map(|i| if structured && i < n { Scalar::zero() } else { small_scalar(rng) })
                .collect()
        })
        .collect();
    DiagonalSemidirectSpec::new(growth, rotation).unwrap()
}

/// A point whose `p` is zero, fully supported or mixed.
pub fn random_point(spec: &DiagonalSemidirectSpec, rng: &mut impl Rng) -> Point {
    let pattern = rng.random_range(0..6);
    let p = (0..spec.n())
        .map(|_| {
            let zero = match pattern {
                0 => true,
                1 => rng.random_bool(0.5),
                _ => false,
            };
            if zero {
                ExactComplex::default()
            } else {
                loop {
                    let z = ExactComplex::new(
                        Scalar::int(rng.random_range(-3..=3)),
                        Scalar::int(rng.random_range(-3..=3)),
                    );
                    if !z.is_zero() {
                        break z;
                    }
                }
            }
        })
        .collect();
    let xi_a = (0..spec.k()).map(|_| small_scalar(rng)).collect();
    Point::new(p, xi_a)
}

/// Nilpotent algebras used as the `N` of codimension-one extensions.
pub fn nilpotent_pool() -> Vec<LieAlgebra> {
    vec![
        standard::heisenberg(),
        standard::filiform4(),
        standard::heisenberg_plus_line(),
        LieAlgebra::abelian(2),
        standard::strictly_upper_triangular(4),
    ]
}

/// A random integer combination of a basis of `Der(𝔫)` for a random `𝔫`
/// from [`nilpotent_pool`].
pub fn random_extension(rng: &mut impl Rng) -> NilExtSpec {
    let pool = nilpotent_pool();
    let nil = pool[rng.random_range(0..pool.len())].clone();
    let basis = derivation_space(&nil);
    let n = nil.dim();
    let mut d = Matrix::zeros(n, n);
    for b in &basis {
        let c = rng.random_range(-2..=2);
        if c != 0 {
            d = d.add(&b.scale(&Scalar::int(c)));
        }
    }
    NilExtSpec::new(nil, d).expect("combinations of derivations are derivations")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_algebras_are_solvable_lie_algebras() {
        for i in 0..20 {
            let alg = random_solvable_algebra(&mut rng_for(7, i));
            assert!(alg.dim() <= 6);
            assert!(alg.validate().is_empty());
            assert!(alg.is_solvable());
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_diagonal_spec(&mut rng_for(1, 4));
        let b = random_diagonal_spec(&mut rng_for(1, 4));
        assert_eq!(a, b);
    }

    #[test]
    fn basis_change_round_trip() {
        let h = standard::heisenberg();
        let p = random_basis_change(3, &mut rng_for(2, 0));
        let back = change_basis(&change_basis(&h, &p), &invert(&p));
        assert_eq!(back, h);
    }
}
