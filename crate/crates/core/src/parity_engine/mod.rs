//! Quadratic splitting data, the local invariants δ_v, their global sum, and
//! the rank predictions they feed.
//!
//! `K = Q(√d)` and `F/K` is a dihedral abelian `p`-extension described only by
//! how each rational prime's places behave in it.

mod field;
mod report;
mod rules;
mod spec;

use thiserror::Error;

use crate::ec_arith::CurveError;

pub use field::{QuadField, Splitting};
pub use report::{
    base_parity, chi_minus_conductor, computed_parity_hypotheses, predict, s_p_places, smult_predict,
    split_mult_conclusions, support, wants_split_mult, BaseParity, Bound, Conclusion, CurveSummary,
    Hypothesis, ParityReport, ParitySource, ParityValue, Relation, TheoremId,
};
pub use rules::{apply_rule, classify_delta, classify_place, Delta, DeltaRecord, Outcome, Place, Rule, RuleMatch};
pub use spec::{Assertions, ExtensionSpec, FBehavior, Mode, Parity, PrimeBehavior};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParityError {
    #[error("d must be squarefree (got {0})")]
    NotSquarefree(i64),
    #[error("d must not be 0 or 1 (got {0})")]
    TrivialField(i64),
    #[error("p must be an odd prime (got {0})")]
    InvalidPrime(u64),
    #[error("n must be at least 1")]
    InvalidExponent,
    #[error("[F:K] = p^n does not fit in 64 bits")]
    DegreeTooLarge,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("places above {0} cannot be both ramified and split completely in F")]
    ConflictingBehavior(u64),
    #[error("maximal_dihedral mode ramifies only above p; {0} cannot be ramified")]
    ModeConflict(u64),
    #[error(
        "rejected by the dihedral inertia rule: {0} ramifies in K/Q and differs from p, so its place cannot ramify in F/K"
    )]
    RamifiedInBoth(u64),
    #[error("split multiplicative analysis needs {reason} at {ell}")]
    SplitMultPrecondition { ell: u64, reason: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
}
