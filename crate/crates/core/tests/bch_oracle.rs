//! BCH products against `log(exp X · exp Y)` computed with nilpotent matrices.

use orbitkit::algebra::standard;
use orbitkit::random::rng_for;
use orbitkit::{Matrix, Scalar};
use rand::Rng;

fn units(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn to_matrix(n: usize, x: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for (c, &(i, j)) in x.iter().zip(&units(n)) {
        m = m.add(&Matrix::from_fn(n, n, |r, s| if (r, s) == (i, j) { c.clone() } else { Scalar::zero() }));
    }
    m
}

fn from_matrix(n: usize, m: &Matrix) -> Vec<Scalar> {
    for i in 0..n {
        for j in 0..=i {
            assert!(m[(i, j)].is_zero(), "not strictly upper triangular");
        }
    }
    units(n).iter().map(|&(i, j)| m[(i, j)].clone()).collect()
}

// Both series terminate because N^n = 0.
fn exp_series(n: usize, x: &Matrix) -> Matrix {
    let mut out = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..n {
        term = term.mul(x).scale(&Scalar::ratio(1, k as i64));
        out = out.add(&term);
    }
    out
}

fn log_series(n: usize, g: &Matrix) -> Matrix {
    let nil = g.sub(&Matrix::identity(n));
    let mut out = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for k in 1..n {
        power = power.mul(&nil);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = out.add(&power.scale(&Scalar::ratio(sign, k as i64)));
    }
    out
}

fn random_vector(dim: usize, rng: &mut impl Rng) -> Vec<Scalar> {
    (0..dim)
        .map(|_| match rng.random_range(0..6) {
            0 => Scalar::theta() * Scalar::int(rng.random_range(-1..=1)),
            _ => Scalar::ratio(rng.random_range(-4..=4), rng.random_range(1..=3)),
        })
        .collect()
}

#[test]
fn bch_matches_matrix_logarithm() {
    for n in [3, 4, 5] {
        let alg = standard::strictly_upper_triangular(n);
        for trial in 0..8 {
            let mut rng = rng_for(31, n * 100 + trial);
            let x = random_vector(alg.dim(), &mut rng);
            let y = random_vector(alg.dim(), &mut rng);
            let z = alg.bch_product(&x, &y).unwrap();
            let product = exp_series(n, &to_matrix(n, &x)).mul(&exp_series(n, &to_matrix(n, &y)));
            let expected = from_matrix(n, &log_series(n, &product));
            assert_eq!(z, expected, "n = {n}, trial {trial}");
        }
    }
}

#[test]
fn matrix_bracket_agrees_with_structure_constants() {
    let n = 4;
    let alg = standard::strictly_upper_triangular(n);
    let mut rng = rng_for(32, 0);
    let x = random_vector(alg.dim(), &mut rng);
    let y = random_vector(alg.dim(), &mut rng);
    let (a, b) = (to_matrix(n, &x), to_matrix(n, &y));
    assert_eq!(alg.bracket(&x, &y), from_matrix(n, &a.mul(&b).sub(&b.mul(&a))));
}

#[test]
fn numeric_bch_matches_exact() {
    let theta = 1.3;
    let alg = standard::strictly_upper_triangular(5);
    let num = alg.evaluate(theta).unwrap();
    let class = alg.nilpotency_class().unwrap();
    for trial in 0..5 {
        let mut rng = rng_for(33, trial);
        let x = random_vector(alg.dim(), &mut rng);
        let y = random_vector(alg.dim(), &mut rng);
        let exact = alg.bch_product(&x, &y).unwrap();
        let ev = |v: &[Scalar]| v.iter().map(|s| s.evaluate(theta).unwrap()).collect::<Vec<_>>();
        let approx = num.bch_product(&ev(&x), &ev(&y), class);
        for (a, e) in approx.iter().zip(ev(&exact)) {
            assert!((a - e).abs() < 1e-10, "{a} vs {e}");
        }
    }
}

#[test]
fn heisenberg_closed_form() {
    let h = standard::heisenberg();
    let x = vec![Scalar::int(2), Scalar::ratio(1, 3), Scalar::theta()];
    let y = vec![Scalar::int(-1), Scalar::int(5), Scalar::zero()];
    // X + Y + [X, Y]/2 with [e0, e1] = e2.
    let cross = Scalar::int(2) * Scalar::int(5) - Scalar::ratio(1, 3) * Scalar::int(-1);
    let expected = vec![Scalar::int(1), Scalar::ratio(16, 3), Scalar::theta() + cross / Scalar::int(2)];
    assert_eq!(h.bch_product(&x, &y).unwrap(), expected);
}
