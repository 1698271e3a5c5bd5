//! Exact and numerical tools for coadjoint orbits of solvable Lie groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`], [`linalg`], [`numeric`]: the field `ℚ(θ)` with `θ`
//!   transcendental, exact row reduction and canonical subspaces, and the
//!   floating-point matrix exponential.
//! * [`algebra`], [`bch`]: Lie algebras from structure constants, `ad`,
//!   `ψ(ad x)` and Baker–Campbell–Hausdorff products.
//! * [`coadjoint`]: stabilizers, the generic rank scan, openness and flow
//!   based confinement checks for an arbitrary algebra.
//! * [`semidirect`]: groups `ℂⁿ ⋊ ℝᵏ` with diagonal action, the Kronecker
//!   density conditions and the square-integrable / type I classifier.
//! * [`nilext`]: extensions `N ⋊ ℝ` of nilpotent groups by a derivation,
//!   with the explicit coadjoint matrix and its BCH oracle.
//! * [`io`], [`golden`]: JSON schemas and the bundled regression suite.

pub mod algebra;
pub mod bch;
pub mod coadjoint;
pub mod error;
pub mod golden;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod nilext;
pub mod numeric;
pub mod par;
pub mod random;
pub mod scalar;
pub mod semidirect;
pub mod spectrum;
pub mod verdict;

pub use algebra::{LieAlgebra, Psi, Truncation, Violation};
pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace};
pub use par::Execution;
pub use scalar::{Poly, Scalar};

/// Default numeric value substituted for `θ` (an irrational number).
pub const DEFAULT_THETA: f64 = std::f64::consts::SQRT_2;
