//! Numerical toolbox for constructing witnesses of genuine multipartite
//! entanglement from positive maps.
//!
//! The crate is organized bottom-up:
//!
//! - [`hermitian`]: dense complex matrices and a cyclic Jacobi eigensolver
//!   for Hermitian input; everything else is built on it.
//! - [`multipartite`]: party bookkeeping — space shapes, bipartitions,
//!   partial transposition, and partial application of a map to a subset
//!   of parties.
//! - [`maps`]: positive (not completely positive) maps in superoperator
//!   form, their duals, and a randomized positivity probe.
//! - [`witness`]: the witness construction itself — per-partition map
//!   images, their entrywise overlap, and the assembled GME witness.
//! - [`states`]: the state families used throughout — GHZ states, a
//!   PPT-invariant bound-entangled family of three qutrits, noisy and
//!   two-parameter mixtures, plus random biseparable states for property
//!   testing.
//!
//! All matrices are dense and small (at most a few hundred rows); every
//! operation is a pure function on immutable inputs.

pub mod hermitian;
pub mod maps;
pub mod multipartite;
pub mod states;
pub mod witness;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input violated the Hermiticity tolerance where a Hermitian matrix
    /// was required.
    #[error("matrix is not Hermitian: max |A_ij - conj(A_ji)| = {violation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { violation: f64, tolerance: f64 },

    /// Two operands (or an operand and a declared shape) disagree in size.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A party subset or permutation refers to parties outside the shape.
    #[error("invalid party subset or permutation: {0}")]
    InvalidParties(String),

    /// A scalar parameter is outside its documented validity range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A matrix that must be a density operator failed the state check.
    #[error("not a valid state: trace = {trace:.12}, min eigenvalue = {min_eigenvalue:.3e}")]
    NotAState { trace: f64, min_eigenvalue: f64 },

    /// The Jacobi sweep limit was exhausted before convergence.
    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {offdiag:.3e})")]
    NoConvergence { sweeps: usize, offdiag: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub use hermitian::{herm_eig, kron, min_eigenvalue, positive_part, trace_product, C64, ComplexMatrix, EigenDecomposition};
pub use multipartite::{enumerate_bipartitions, Bipartition, SpaceShape};
pub use maps::{MapSpec, Superoperator};
