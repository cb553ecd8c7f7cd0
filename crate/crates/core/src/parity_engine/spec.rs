use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{is_odd_prime, is_prime};

use super::field::{QuadField, Splitting};
use super::ParityError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Inside the maximal dihedral `p`-extension ramified only above `p`.
    MaximalDihedral,
    /// Local behavior given prime by prime.
    Explicit,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::MaximalDihedral => "maximal_dihedral",
            Mode::Explicit => "explicit",
        })
    }
}

/// User-supplied behavior of the places above a rational prime in `F/K`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeBehavior {
    pub ramified_in_f: bool,
    pub splits_completely_in_f: bool,
}

impl PrimeBehavior {
    pub const RAMIFIED: Self = Self { ramified_in_f: true, splits_completely_in_f: false };
    pub const SPLIT: Self = Self { ramified_in_f: false, splits_completely_in_f: true };
    pub const UNRAMIFIED: Self = Self { ramified_in_f: false, splits_completely_in_f: false };
}

/// Resolved behavior in `F/K` of a place of `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FBehavior {
    /// Ramified; totally ramified whenever `v = v^c`.
    Ramified,
    SplitsCompletely,
    /// Unramified, splitting not known.
    Unramified,
}

impl fmt::Display for FBehavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FBehavior::Ramified => "ramified",
            FBehavior::SplitsCompletely => "splits_completely",
            FBehavior::Unramified => "unramified",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// Hypotheses about `Sel_{p^∞}(E/K)` that cannot be computed here.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertions {
    /// Parity of `corank Sel_{p^∞}(E/K)`.
    pub corank_parity: Option<Parity>,
    /// `Sel_{p^∞}(E/K) ≅ Q_p/Z_p`.
    pub cofree_rank_one: bool,
    pub finite: bool,
    pub zero: bool,
}

impl Assertions {
    /// The corank parity pinned down by the assertions.
    pub fn implied_parity(&self) -> Option<Parity> {
        if self.corank_parity.is_some() {
            self.corank_parity
        } else if self.cofree_rank_one {
            Some(Parity::Odd)
        } else if self.finite || self.zero {
            Some(Parity::Even)
        } else {
            None
        }
    }

    pub fn is_consistent(&self) -> bool {
        let sel_even = self.finite || self.zero;
        !(self.cofree_rank_one && sel_even)
            && !(self.corank_parity == Some(Parity::Even) && self.cofree_rank_one)
            && !(self.corank_parity == Some(Parity::Odd) && sel_even)
    }
}

/// A dihedral abelian extension `F/K` of degree `p^n`, described by local data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub p: u64,
    pub n: u32,
    pub mode: Mode,
    /// Overrides keyed by rational prime.
    pub behavior: BTreeMap<u64, PrimeBehavior>,
}

impl ExtensionSpec {
    pub fn maximal_dihedral(p: u64, n: u32) -> Self {
        Self { p, n, mode: Mode::MaximalDihedral, behavior: BTreeMap::new() }
    }

    pub fn explicit(p: u64, n: u32, behavior: impl IntoIterator<Item = (u64, PrimeBehavior)>) -> Self {
        Self { p, n, mode: Mode::Explicit, behavior: behavior.into_iter().collect() }
    }

    pub fn with(mut self, ell: u64, b: PrimeBehavior) -> Self {
        self.behavior.insert(ell, b);
        self
    }

    /// `[F:K]`, if it fits in a `u64`.
    pub fn degree(&self) -> Option<u64> {
        self.p.checked_pow(self.n)
    }

    /// Behavior of the places above `ℓ`. Unramified self-conjugate places
    /// split completely, since a ramified one would have to be totally ramified.
    pub fn behavior_at(&self, ell: u64, splitting: Splitting) -> FBehavior {
        let given = match (self.behavior.get(&ell), self.mode) {
            (Some(b), _) => *b,
            (None, Mode::MaximalDihedral) if ell == self.p => PrimeBehavior::RAMIFIED,
            (None, _) => PrimeBehavior::UNRAMIFIED,
        };
        if given.ramified_in_f {
            FBehavior::Ramified
        } else if given.splits_completely_in_f || splitting.is_self_conjugate() {
            FBehavior::SplitsCompletely
        } else {
            FBehavior::Unramified
        }
    }

    /// Rational primes whose places ramify in `F/K`.
    pub fn ramified_primes(&self, field: &QuadField) -> Vec<u64> {
        let mut out: Vec<u64> =
            self.behavior.iter().filter(|(_, b)| b.ramified_in_f).map(|(&l, _)| l).collect();
        if self.mode == Mode::MaximalDihedral && !self.behavior.contains_key(&self.p) {
            out.push(self.p);
        }
        out.retain(|&l| field.split_behavior(l).is_ok());
        out.sort_unstable();
        out
    }

    /// Structural checks. A self-conjugate place `v ∤ p` ramified in `F`
    /// must be unramified in `K/Q`; anything else is accepted.
    pub fn validate(&self, field: &QuadField) -> Result<(), ParityError> {
        if !is_odd_prime(self.p) {
            return Err(ParityError::InvalidPrime(self.p));
        }
        if self.n == 0 {
            return Err(ParityError::InvalidExponent);
        }
        if self.degree().is_none() {
            return Err(ParityError::DegreeTooLarge);
        }
        for (&ell, b) in &self.behavior {
            if !is_prime(ell as u128) {
                return Err(ParityError::NotPrime(ell));
            }
            if b.ramified_in_f && b.splits_completely_in_f {
                return Err(ParityError::ConflictingBehavior(ell));
            }
            if self.mode == Mode::MaximalDihedral && ell != self.p && b.ramified_in_f {
                return Err(ParityError::ModeConflict(ell));
            }
            let s = field.split_behavior(ell)?;
            if b.ramified_in_f && ell != self.p && s == Splitting::Ramified {
                return Err(ParityError::RamifiedInBoth(ell));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_mode_defaults() {
        let k = QuadField::new(-7).unwrap();
        let s = ExtensionSpec::maximal_dihedral(5, 1);
        s.validate(&k).unwrap();
        assert_eq!(s.behavior_at(5, Splitting::Inert), FBehavior::Ramified);
        assert_eq!(s.behavior_at(37, Splitting::Split), FBehavior::Unramified);
        assert_eq!(s.behavior_at(3, Splitting::Inert), FBehavior::SplitsCompletely);
        assert_eq!(s.ramified_primes(&k), vec![5]);
    }

    #[test]
    fn structural_rejection() {
        let k = QuadField::new(-7).unwrap();
        let bad = ExtensionSpec::explicit(5, 1, [(7, PrimeBehavior::RAMIFIED)]);
        assert_eq!(bad.validate(&k), Err(ParityError::RamifiedInBoth(7)));
        // Same prime unramified in F, or ℓ = p, is fine.
        ExtensionSpec::explicit(5, 1, [(7, PrimeBehavior::SPLIT)]).validate(&k).unwrap();
        ExtensionSpec::explicit(7, 1, [(7, PrimeBehavior::RAMIFIED)]).validate(&k).unwrap();
        // Ramified in F but inert in K is allowed.
        ExtensionSpec::explicit(5, 1, [(19, PrimeBehavior::RAMIFIED)]).validate(&k).unwrap();
    }

    #[test]
    fn other_rejections() {
        let k = QuadField::new(-7).unwrap();
        let both = PrimeBehavior { ramified_in_f: true, splits_completely_in_f: true };
        assert_eq!(
            ExtensionSpec::explicit(5, 1, [(11, both)]).validate(&k),
            Err(ParityError::ConflictingBehavior(11))
        );
        assert_eq!(
            ExtensionSpec::maximal_dihedral(5, 1).with(11, PrimeBehavior::RAMIFIED).validate(&k),
            Err(ParityError::ModeConflict(11))
        );
        assert_eq!(ExtensionSpec::maximal_dihedral(9, 1).validate(&k), Err(ParityError::InvalidPrime(9)));
        assert_eq!(ExtensionSpec::maximal_dihedral(2, 1).validate(&k), Err(ParityError::InvalidPrime(2)));
        assert_eq!(
            ExtensionSpec::explicit(5, 1, [(15, PrimeBehavior::SPLIT)]).validate(&k),
            Err(ParityError::NotPrime(15))
        );
    }
}
