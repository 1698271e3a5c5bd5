//! Coadjoint action of a general Lie algebra: stabilizers `g(ξ)`, the
//! generic stabilizer dimension `k₀`, open orbits, and flow-based checks of
//! affine confinement `Gξ ⊆ ξ + h^⊥`.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::numeric::exp_matrix;
use crate::par::Execution;
use crate::scalar::{evaluate_vec, Scalar};
use crate::DEFAULT_THETA;

/// Absolute tolerance for flow-based checks.
pub const FLOW_TOLERANCE: f64 = 1e-9;

/// Default number of covectors drawn by the generic rank scan.
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitReport {
    pub stabilizer: Subspace,
    pub orbit_dim: usize,
    pub is_generic: bool,
    pub is_open_orbit: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenericScan {
    pub k0: usize,
    pub witness: Vec<Scalar>,
    pub samples_used: usize,
}

/// Stabilizer algebra `g(ξ) = {x : ⟨ξ, [x, y]⟩ = 0 for all y}`, i.e. the
/// kernel of `x ↦ -ξ ∘ ad x`.
pub fn stabilizer_subalg(alg: &LieAlgebra, xi: &[Scalar]) -> Subspace {
    let d = alg.dim();
    assert_eq!(xi.len(), d, "covector length must match the algebra dimension");
    let m = Matrix::from_fn(d, d, |j, i| {
        crate::scalar::dot(xi, alg.basis_bracket(i, j))
    });
    m.kernel()
}

pub fn orbit_report(alg: &LieAlgebra, xi: &[Scalar], k0: usize) -> OrbitReport {
    let stabilizer = stabilizer_subalg(alg, xi);
    let dim = stabilizer.dim();
    OrbitReport {
        orbit_dim: alg.dim() - dim,
        is_generic: dim == k0,
        is_open_orbit: dim == 0,
        stabilizer,
    }
}

/// The `index`-th pseudo-random covector of the scan for `seed`: integer
/// coordinates in `[-9, 9]`, independent of every other index.
pub fn sample_covector(dim: usize, seed: u64, index: usize) -> Vec<Scalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    (0..dim).map(|_| Scalar::int(rng.random_range(-9..=9))).collect()
}

/// Minimizes `dim g(ξ)` over `sample_count` pseudo-random covectors.
///
/// The first sample attaining the minimum is the witness, so the result is
/// a function of `(seed, sample_count)` only and `k0` is non-increasing in
/// `sample_count`.
pub fn generic_rank_scan(alg: &LieAlgebra, sample_count: usize, seed: u64) -> Result<GenericScan> {
    generic_rank_scan_with(alg, sample_count, seed, Execution::default())
}

pub fn generic_rank_scan_with(
    alg: &LieAlgebra,
    sample_count: usize,
    seed: u64,
    exec: Execution,
) -> Result<GenericScan> {
    if sample_count == 0 {
        return Err(Error::Precondition("sample_count must be at least 1".into()));
    }
    let dims = exec.map_range(sample_count, |i| {
        stabilizer_subalg(alg, &sample_covector(alg.dim(), seed, i)).dim()
    });
    let (index, &k0) = dims
        .iter()
        .enumerate()
        .min_by_key(|&(i, d)| (*d, i))
        .unwrap();
    Ok(GenericScan {
        k0,
        witness: sample_covector(alg.dim(), seed, index),
        samples_used: sample_count,
    })
}

pub fn is_generic(alg: &LieAlgebra, xi: &[Scalar], k0: usize) -> bool {
    stabilizer_subalg(alg, xi).dim() == k0
}

pub fn is_open_orbit(alg: &LieAlgebra, xi: &[Scalar]) -> bool {
    stabilizer_subalg(alg, xi).is_zero()
}

/// Sampling grid and numeric context for flow-based checks.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowParams {
    pub theta: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
    pub execution: Execution,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams {
            theta: DEFAULT_THETA,
            t_min: -2.0,
            t_max: 2.0,
            steps: 64,
            execution: Execution::default(),
        }
    }
}

impl FlowParams {
    pub fn grid(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.t_min];
        }
        let h = (self.t_max - self.t_min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.t_min + h * i as f64).collect()
    }
}

/// Trajectory `ξ(t) = ξ ∘ exp(-t ad x)` on the given grid.
pub fn coadjoint_flow(
    alg: &LieAlgebra,
    xi: &[Scalar],
    x: &[Scalar],
    t_grid: &[f64],
    theta: f64,
) -> Result<Vec<DVector<f64>>> {
    coadjoint_flow_with(alg, xi, x, t_grid, theta, Execution::default())
}

pub fn coadjoint_flow_with(
    alg: &LieAlgebra,
    xi: &[Scalar],
    x: &[Scalar],
    t_grid: &[f64],
    theta: f64,
    exec: Execution,
) -> Result<Vec<DVector<f64>>> {
    let a = alg.ad(x).evaluate(theta)?;
    let xi = DVector::from_vec(evaluate_vec(xi, theta)?);
    Ok(exec.map_range(t_grid.len(), |i| {
        exp_matrix(&a, -t_grid[i]).transpose() * &xi
    }))
}

/// Checks `⟨η - ξ, h⟩ = 0` (within [`FLOW_TOLERANCE`]) for sampled points
/// `η` of the orbit of `ξ`, where `h` must be an ideal inside `g(ξ)`.
///
/// Orbit points come from one-parameter flows along every basis vector and
/// from two-step flows along pairs of basis vectors.
pub fn check_affine_confinement(
    alg: &LieAlgebra,
    xi: &[Scalar],
    h: &Subspace,
    params: &FlowParams,
) -> Result<bool> {
    if !alg.is_ideal(h) {
        return Err(Error::NotAnIdeal);
    }
    if !h.is_subspace_of(&stabilizer_subalg(alg, xi)) {
        return Err(Error::NotInStabilizer);
    }
    if h.is_zero() {
        return Ok(true);
    }
    let theta = params.theta;
    let d = alg.dim();
    let xi_num = DVector::from_vec(evaluate_vec(xi, theta)?);
    let h_num: Vec<DVector<f64>> = h
        .basis()
        .iter()
        .map(|b| evaluate_vec(b, theta).map(DVector::from_vec))
        .collect::<Result<_>>()?;
    let ads = (0..d)
        .map(|i| alg.ad(&alg.basis_vector(i)).evaluate(theta))
        .collect::<Result<Vec<_>>>()?;
    let grid = params.grid();
    let coarse: Vec<f64> = grid.iter().step_by((grid.len() / 8).max(1)).copied().collect();

    let confined = |eta: &DVector<f64>| {
        let delta = eta - &xi_num;
        h_num.iter().all(|b| delta.dot(b).abs() <= FLOW_TOLERANCE)
    };

    let single = params.execution.map_range(d * grid.len(), |idx| {
        let (i, k) = (idx / grid.len(), idx % grid.len());
        confined(&(exp_matrix(&ads[i], -grid[k]).transpose() * &xi_num))
    });
    if !single.iter().all(|&ok| ok) {
        return Ok(false);
    }
    let n_pairs = d * d * coarse.len() * coarse.len();
    let double = params.execution.map_range(n_pairs, |idx| {
        let c = coarse.len();
        let (i, rest) = (idx / (d * c * c), idx % (d * c * c));
        let (j, rest) = (rest / (c * c), rest % (c * c));
        let (s, t) = (coarse[rest / c], coarse[rest % c]);
        let step = exp_matrix(&ads[i], -s).transpose() * &xi_num;
        confined(&(exp_matrix(&ads[j], -t).transpose() * step))
    });
    Ok(double.iter().all(|&ok| ok))
}

/// How [`nilpotent_flat_generic`] decides flatness; echoed in reports.
pub const FLATNESS_CRITERION: &str = "generic orbits are flat when the generic stabilizer equals the center";

/// For a nilpotent algebra: do generic stabilizers coincide with the center?
/// This is the flatness test used for generic coadjoint orbits.
pub fn nilpotent_flat_generic(alg: &LieAlgebra) -> Result<bool> {
    if !alg.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let scan = generic_rank_scan(alg, DEFAULT_SAMPLES, 0)?;
    Ok(stabilizer_subalg(alg, &scan.witness) == alg.center())
}

/// JSON summary of [`analyze`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoadjointReport {
    pub k0: usize,
    pub witness: Vec<String>,
    pub stabilizer_dim: usize,
    pub open_orbit: bool,
    /// Only defined for nilpotent algebras.
    pub flat_generic: Option<bool>,
}

pub fn analyze(alg: &LieAlgebra, sample_count: usize, seed: u64) -> Result<CoadjointReport> {
    let scan = generic_rank_scan(alg, sample_count, seed)?;
    let report = orbit_report(alg, &scan.witness, scan.k0);
    let flat_generic = if alg.is_nilpotent() {
        Some(stabilizer_subalg(alg, &scan.witness) == alg.center())
    } else {
        None
    };
    Ok(CoadjointReport {
        k0: scan.k0,
        witness: scan.witness.iter().map(ToString::to_string).collect(),
        stabilizer_dim: report.stabilizer.dim(),
        open_orbit: report.is_open_orbit,
        flat_generic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::standard::*;
    use crate::scalar::int_vec;

    #[test]
    fn stabilizer_examples() {
        let h = heisenberg();
        assert_eq!(stabilizer_subalg(&h, &int_vec(&[0, 0, 0])), Subspace::full(3));
        assert_eq!(stabilizer_subalg(&h, &int_vec(&[0, 0, 1])), h.center());
        let a = affine_line();
        assert_eq!(stabilizer_subalg(&a, &int_vec(&[0, 1])), Subspace::zero(2));
    }

    #[test]
    fn generic_rank_examples() {
        assert_eq!(generic_rank_scan(&LieAlgebra::abelian(3), 50, 1).unwrap().k0, 3);
        assert_eq!(generic_rank_scan(&heisenberg(), 50, 1).unwrap().k0, 1);
        assert_eq!(generic_rank_scan(&affine_line(), 50, 1).unwrap().k0, 0);
        assert_eq!(generic_rank_scan(&filiform4(), 50, 1).unwrap().k0, 2);
        assert!(generic_rank_scan(&heisenberg(), 0, 1).is_err());
    }

    #[test]
    fn genericity_and_openness() {
        let h = heisenberg();
        assert!(is_generic(&h, &int_vec(&[0, 0, 1]), 1));
        assert!(!is_generic(&h, &int_vec(&[1, 0, 0]), 1));
        assert!(is_generic(&LieAlgebra::abelian(2), &int_vec(&[4, -1]), 2));
        assert!(!is_open_orbit(&LieAlgebra::abelian(2), &int_vec(&[4, -1])));
        assert!(is_open_orbit(&affine_line(), &int_vec(&[1, 1])));
        assert!(!is_open_orbit(&h, &int_vec(&[3, 1, 7])));
    }

    #[test]
    fn orbit_report_dimensions_add_up() {
        let f = filiform4();
        let r = orbit_report(&f, &int_vec(&[1, 2, -1, 3]), 2);
        assert_eq!(r.orbit_dim + r.stabilizer.dim(), 4);
        assert!(r.is_generic);
    }

    #[test]
    fn flow_examples() {
        let h = heisenberg();
        let grid = [-1.0, 0.0, 0.5, 2.0];
        let zstar = int_vec(&[0, 0, 1]);
        let central = coadjoint_flow(&h, &zstar, &int_vec(&[0, 0, 1]), &grid, 1.0).unwrap();
        assert!(central.iter().all(|p| (p - DVector::from_vec(vec![0.0, 0.0, 1.0])).amax() == 0.0));
        let traj = coadjoint_flow(&h, &zstar, &int_vec(&[1, 0, 0]), &grid, 1.0).unwrap();
        for (t, p) in grid.iter().zip(&traj) {
            // ξ∘exp(-t ad X) = Z* - t Y*
            assert!((p[0]).abs() < 1e-15);
            assert!((p[1] + t).abs() < 1e-14);
            assert!((p[2] - 1.0).abs() < 1e-15);
        }
        assert_eq!(traj[1], DVector::from_vec(vec![0.0, 0.0, 1.0]));
    }

    #[test]
    fn confinement_preconditions() {
        let h = heisenberg();
        let params = FlowParams::default();
        assert!(check_affine_confinement(&h, &int_vec(&[2, -1, 3]), &Subspace::zero(3), &params).unwrap());
        assert!(check_affine_confinement(&h, &int_vec(&[2, -1, 3]), &h.center(), &params).unwrap());
        let a = affine_line();
        let y = Subspace::span(2, &[int_vec(&[0, 1])]);
        assert_eq!(
            check_affine_confinement(&a, &int_vec(&[0, 1]), &y, &params).unwrap_err(),
            Error::NotInStabilizer
        );
        let x = Subspace::span(2, &[int_vec(&[1, 0])]);
        assert_eq!(
            check_affine_confinement(&a, &int_vec(&[0, 1]), &x, &params).unwrap_err(),
            Error::NotAnIdeal
        );
    }

    #[test]
    fn flatness_examples() {
        assert!(nilpotent_flat_generic(&heisenberg()).unwrap());
        assert!(nilpotent_flat_generic(&LieAlgebra::abelian(3)).unwrap());
        assert!(!nilpotent_flat_generic(&filiform4()).unwrap());
        assert_eq!(nilpotent_flat_generic(&affine_line()).unwrap_err(), Error::NotNilpotent);
    }
}
