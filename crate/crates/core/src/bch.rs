//! Baker–Campbell–Hausdorff products on nilpotent Lie algebras.
//!
//! The homogeneous components `z_n` of `log(exp x exp y)` are generated by
//! the commutator recursion
//!
//! ```text
//! z_1 = x + y
//! (n+1) z_{n+1} = ½[x − y, z_n]
//!     + Σ_{p≥1, 2p≤n} B_{2p}/(2p)! Σ_{k_1+…+k_{2p}=n} [z_{k_1},[…,[z_{k_{2p}}, x + y]…]]
//! ```
//!
//! which needs no Dynkin words. On an algebra of nilpotency class `c` every
//! `z_n` with `n > c` vanishes, so the sum is finite and exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::{rational_to_f64, Scalar};

/// Field-like coefficient type the recursion can run over.
pub trait Coefficient: Clone + Send + Sync {
    fn zero() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn from_rational(q: &BigRational) -> Self {
        Scalar::rational(q.clone())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl Coefficient for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

/// Bernoulli numbers `B_0..=B_m` (convention `B_1 = -1/2`).
pub fn bernoulli_numbers(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    b.push(BigRational::one());
    for n in 1..=m {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        // binom = C(n+1, k)
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn axpy<T: Coefficient>(acc: &mut [T], c: &T, v: &[T]) {
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a = a.add(&c.mul(b));
        }
    }
}

fn compositions(n: usize, parts: usize, out: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
    if parts == 0 {
        if n == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if n < parts {
        return;
    }
    for first in 1..=(n - parts + 1) {
        prefix.push(first);
        compositions(n - first, parts - 1, out, prefix);
        prefix.pop();
    }
}

/// Homogeneous BCH components `z_1..=z_class` for `log(exp x exp y)`.
pub fn bch_components<T, F>(bracket: F, x: &[T], y: &[T], class: usize) -> Vec<Vec<T>>
where
    T: Coefficient,
    F: Fn(&[T], &[T]) -> Vec<T>,
{
    let dim = x.len();
    let minus_one = T::from_rational(&-BigRational::one());
    let half = T::from_rational(&BigRational::new(1.into(), 2.into()));
    let sum: Vec<T> = x.iter().zip(y).map(|(a, b)| a.add(b)).collect();
    let diff: Vec<T> = x.iter().zip(y).map(|(a, b)| a.add(&minus_one.mul(b))).collect();
    let bern = bernoulli_numbers(class.max(2));

    let mut z: Vec<Vec<T>> = vec![Vec::new(), sum.clone()];
    for n in 1..class {
        let mut next = vec![T::zero(); dim];
        axpy(&mut next, &half, &bracket(&diff, &z[n]));
        for p in 1..=n / 2 {
            let k = &bern[2 * p] / BigRational::from_integer(factorial(2 * p));
            if k.is_zero() {
                continue;
            }
            let k = T::from_rational(&k);
            let mut parts = Vec::new();
            compositions(n, 2 * p, &mut parts, &mut Vec::new());
            for comp in parts {
                let mut acc = sum.clone();
                for &ki in comp.iter().rev() {
                    acc = bracket(&z[ki], &acc);
                }
                axpy(&mut next, &k, &acc);
            }
        }
        let inv = T::from_rational(&BigRational::new(1.into(), BigInt::from(n + 1)));
        let scaled: Vec<T> = next.iter().map(|v| inv.mul(v)).collect();
        z.push(scaled);
    }
    z.remove(0);
    z
}

/// `z` with `exp z = exp x · exp y` on an algebra of nilpotency class `class`.
pub fn bch_series<T, F>(bracket: F, x: &[T], y: &[T], class: usize) -> Vec<T>
where
    T: Coefficient,
    F: Fn(&[T], &[T]) -> Vec<T>,
{
    if class == 0 {
        return vec![T::zero(); x.len()];
    }
    let comps = bch_components(bracket, x, y, class);
    let one = T::from_rational(&BigRational::one());
    let mut out = vec![T::zero(); x.len()];
    for c in &comps {
        axpy(&mut out, &one, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(8);
        let q = |p: i64, d: i64| BigRational::new(p.into(), d.into());
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[3], q(0, 1));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[6], q(1, 42));
        assert_eq!(b[8], q(-1, 30));
    }

    #[test]
    fn compositions_enumerate() {
        let mut out = Vec::new();
        compositions(4, 2, &mut out, &mut Vec::new());
        assert_eq!(out, vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
    }
}
