//! Exact linear algebra over F_p for odd primes p: canonical subspaces, bilinear
//! forms, orthogonal complements and maximal isotropic subspaces.

mod bilinear;
mod matrix;
mod subspace;

pub use bilinear::{determinant, orth_complement, random_max_isotropic, BilinearSpace};
pub use matrix::{rref_rank, FpMatrix};
pub use subspace::Subspace;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("bilinear space is not split (symmetric, nondegenerate, hyperbolic)")]
    NotSplit,
    #[error("starting subspace is not isotropic")]
    NotIsotropic,
    #[error("no isotropic extension vector found")]
    IsotropicSearchFailed,
}
