//! Exact arithmetic in `R = Z[ζ_{p^n}]` and its quotients `R/p^m`: the
//! involution, uniformizer and different, the trace pairing and the transports
//! it induces, skew-Hermitian decompositions, and lattice decompositions of
//! the group ring of a cyclic `p`-group.

mod check;
mod group_ring;
mod ideal;
mod intmat;
mod module;
mod ring;
mod skew;
mod trace;

use thiserror::Error;

pub use check::{run_check, CheckConfig, CheckReport, CheckResult};
pub use group_ring::{
    default_bound, group_ring_split, group_ring_split_bounded, GroupRingLattice, LevelComponent,
};
pub use ideal::{ideal_pairing, tensor_model, IdealPairing};
pub use intmat::{
    det_bareiss, hnf, inverse_mod, left_kernel, mat_mul, smith_divisors, to_int_matrix, IntMatrix,
};
pub use module::{
    compose_tau, equivariance_sign_adjoint, hom_hat_at, hom_transport, is_equivariant_semilinear,
    leibniz_det, to_adjoint, to_semilinear, AdjointPairing, FiniteCycModule, Functional,
    Involution, ModElem, SemilinearPairing,
};
pub use ring::{CycElement, CycRing};
pub use skew::{decompose_skew_hermitian, random_skew_system, Decomposition, SkewSystem};
pub use trace::{DifferentConvention, TracePairing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("exponents must be positive")]
    InvalidExponent,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("element is not divisible as required")]
    NotDivisible,
    #[error("operation needs a p^m truncation")]
    PrecisionRequired,
    #[error("trace pairing is not perfect")]
    NotPerfect,
    #[error("shape mismatch")]
    ShapeMismatch,
    #[error("pairing value at ({0}, {1}) is not killed by the generator orders")]
    IllDefinedPairing(usize, usize),
    #[error("pairing is not {0}")]
    KindMismatch(&'static str),
    #[error("pairing is degenerate")]
    Degenerate,
    #[error("p^n = {0} exceeds the configured bound")]
    TooLarge(u64),
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
}
