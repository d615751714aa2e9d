//! Translation-invariant finitely correlated states (FCS) of an infinite
//! spin-1/2 chain, built from a pair of Kraus matrices acting on a small
//! auxiliary algebra.
//!
//! The crate constructs local density matrices on arbitrary finite site sets
//! of the chain, evaluates two-qubit and qubit-block entanglement measures
//! (Wootters concurrence, entanglement of formation, negativity, partial
//! transpose tests), and runs parameter sweeps and derivative-free
//! maximization over the built-in example families.
//!
//! Modules:
//! - [`matcore`]: dense complex linear algebra (Kronecker products, Hermitian
//!   eigendecomposition, PSD square roots, partial trace/transpose).
//! - [`fcs`]: the Kraus triple, transfer-operator spectrum and fixed point,
//!   and reduced states on contiguous or gapped site sets.
//! - [`entanglement`]: concurrence, EoF, negativity, PPT and entropy.
//! - [`families`]: the three built-in parametric families with closed-form
//!   invariant states and concurrence oracles.
//! - [`sweep`]: measure pipelines, grid sweeps, golden-section maximization
//!   and the concurrence-hierarchy audit.

pub mod entanglement;
mod error;
pub mod families;
pub mod fcs;
pub mod matcore;
pub mod sweep;
pub mod tolerances;

pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, DensityMatrix};
pub use tolerances::Tolerances;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
