use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ec_arith::{Curve, PKind, ReductionType};

use super::field::{QuadField, Splitting};
use super::spec::{ExtensionSpec, FBehavior};
use super::ParityError;

/// A local invariant: 0, 1, or not decided by any rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DeltaRepr", into = "DeltaRepr")]
pub enum Delta {
    Zero,
    One,
    Unknown,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DeltaRepr {
    Num(u8),
    Word(String),
}

impl From<Delta> for DeltaRepr {
    fn from(d: Delta) -> Self {
        match d {
            Delta::Zero => DeltaRepr::Num(0),
            Delta::One => DeltaRepr::Num(1),
            Delta::Unknown => DeltaRepr::Word("unknown".into()),
        }
    }
}

impl TryFrom<DeltaRepr> for Delta {
    type Error = String;

    fn try_from(r: DeltaRepr) -> Result<Self, String> {
        match r {
            DeltaRepr::Num(0) => Ok(Delta::Zero),
            DeltaRepr::Num(1) => Ok(Delta::One),
            DeltaRepr::Word(w) if w == "unknown" => Ok(Delta::Unknown),
            _ => Err("delta must be 0, 1 or \"unknown\"".into()),
        }
    }
}

impl Delta {
    pub fn from_bit(b: bool) -> Self {
        if b {
            Delta::One
        } else {
            Delta::Zero
        }
    }

    /// Sum mod 2; unknown absorbs.
    pub fn add(self, other: Delta) -> Delta {
        match (self, other) {
            (Delta::Unknown, _) | (_, Delta::Unknown) => Delta::Unknown,
            (a, b) => Delta::from_bit((a == Delta::One) != (b == Delta::One)),
        }
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Delta::Zero => "0",
            Delta::One => "1",
            Delta::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl Rule {
    pub const ALL: [Rule; 6] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6];

    pub fn id(self) -> &'static str {
        match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::R6 => "R6",
        }
    }

    pub fn cite(self) -> &'static str {
        match self {
            Rule::R1 => "conjugate places v != v^c carry equal delta, so the pair contributes 0",
            Rule::R2 => "v = v^c unramified in a dihedral extension splits completely, so delta_v = 0",
            Rule::R3 => {
                "v = v^c totally ramified, v prime to p, good reduction: delta_v = dim E(K_v)[p] mod 2, and that dimension is even"
            }
            Rule::R4 => {
                "v | p, good ordinary reduction: delta_v = 0; norm index has dimension 2 if anomalous, else 0"
            }
            Rule::R5 => {
                "v | p, good supersingular reduction, E over Q_p, K_v contains the unramified quadratic extension (and |E(F_3)| = 4 if p = 3): delta_v = 0"
            }
            Rule::R6 => {
                "v | p, v = v^c totally ramified, split multiplicative reduction: local norm index is p, so delta_v = 1"
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// The places of `K` above one rational prime, with their behavior in `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Place {
    pub ell: u64,
    pub splitting: Splitting,
    pub behavior: FBehavior,
}

impl Place {
    pub fn resolve(field: &QuadField, spec: &ExtensionSpec, ell: u64) -> Result<Self, ParityError> {
        let splitting = field.split_behavior(ell)?;
        let behavior = spec.behavior_at(ell, splitting);
        if behavior == FBehavior::Ramified && ell != spec.p && splitting == Splitting::Ramified {
            return Err(ParityError::RamifiedInBoth(ell));
        }
        Ok(Self { ell, splitting, behavior })
    }

    pub fn residue_degree(&self) -> u32 {
        self.splitting.residue_degree()
    }

    /// In the set of ramified self-conjugate places.
    pub fn is_sigma(&self) -> bool {
        self.splitting.is_self_conjugate() && self.behavior == FBehavior::Ramified
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleMatch {
    pub delta: Delta,
    pub torsion_dim: Option<u32>,
    pub norm_index_dim: Option<u32>,
}

impl RuleMatch {
    fn plain(delta: Delta) -> Self {
        Self { delta, torsion_dim: None, norm_index_dim: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Matched(RuleMatch),
    /// Applies to this kind of place, but these hypotheses fail.
    Failed(Vec<String>),
    NotApplicable,
}

/// Evaluates one rule at one place. Pure in its inputs.
pub fn apply_rule(rule: Rule, curve: &Curve, p: u64, place: &Place) -> Outcome {
    let ell = place.ell;
    let sigma = place.is_sigma();
    match rule {
        Rule::R1 if place.splitting == Splitting::Split => Outcome::Matched(RuleMatch::plain(Delta::Zero)),
        Rule::R2 if place.splitting.is_self_conjugate() && !sigma => {
            Outcome::Matched(RuleMatch::plain(Delta::Zero))
        }
        Rule::R3 if sigma && ell != p => r3(curve, p, place),
        Rule::R4 | Rule::R5 | Rule::R6 if sigma && ell == p => at_p(rule, curve, p, place),
        _ => Outcome::NotApplicable,
    }
}

fn r3(curve: &Curve, p: u64, place: &Place) -> Outcome {
    let ell = place.ell;
    if !curve.has_good_reduction(ell) {
        return Outcome::Failed(vec![format!("good reduction at {ell}")]);
    }
    // Tame dihedral ramification puts μ_p in the residue field with Frobenius
    // acting by inversion; without it the evenness argument has no footing.
    if (ell + 1) % p != 0 {
        return Outcome::Failed(vec![format!("p = {p} divides {ell} + 1")]);
    }
    match curve.torsion_dim_mod_p(ell, place.residue_degree(), p) {
        Ok(d) if d % 2 == 0 => {
            Outcome::Matched(RuleMatch { delta: Delta::Zero, torsion_dim: Some(d), norm_index_dim: None })
        }
        Ok(d) => Outcome::Failed(vec![format!("dim E(K_v)[p] = {d} is even")]),
        Err(e) => Outcome::Failed(vec![format!("torsion at {ell} computable ({e})")]),
    }
}

fn at_p(rule: Rule, curve: &Curve, p: u64, place: &Place) -> Outcome {
    if rule == Rule::R6 {
        return match curve.reduction(p) {
            ReductionType::MultiplicativeSplit => Outcome::Matched(RuleMatch::plain(Delta::One)),
            _ => Outcome::Failed(vec![format!("split multiplicative reduction at {p}")]),
        };
    }
    if !curve.has_good_reduction(p) {
        return Outcome::Failed(vec![format!("good reduction at {p}")]);
    }
    let f = place.residue_degree();
    let c = match curve.classify_at_p(p, f) {
        Ok(c) => c,
        Err(e) => return Outcome::Failed(vec![format!("Frobenius trace at {p} computable ({e})")]),
    };
    match (rule, c.kind) {
        (Rule::R4, PKind::Ordinary) => Outcome::Matched(RuleMatch {
            delta: Delta::Zero,
            torsion_dim: None,
            norm_index_dim: Some(if c.anomalous { 2 } else { 0 }),
        }),
        (Rule::R4, PKind::Supersingular) => {
            Outcome::Failed(vec![format!("ordinary reduction at {p} (a_p = {})", c.a_p)])
        }
        (_, PKind::Ordinary) => Outcome::Failed(vec![format!("supersingular reduction at {p}")]),
        (_, PKind::Supersingular) if c.par5_ok => Outcome::Matched(RuleMatch::plain(Delta::Zero)),
        (_, PKind::Supersingular) => {
            let mut failed = Vec::new();
            if f % 2 != 0 {
                failed.push(format!("K_v contains the unramified quadratic extension of Q_{p}"));
            }
            if p == 3 && curve.count_mod(3).ok() != Some(4) {
                failed.push("|E(F_3)| = 4".to_string());
            }
            Outcome::Failed(failed)
        }
    }
}

/// The local invariant at the places above `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaRecord {
    pub ell: u64,
    pub splitting: Splitting,
    pub residue_degree: u32,
    pub behavior: FBehavior,
    pub reduction: ReductionType,
    pub delta: Delta,
    pub rule: Option<Rule>,
    pub cite: Option<String>,
    pub failed: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub torsion_dim: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub norm_index_dim: Option<u32>,
}

impl DeltaRecord {
    pub fn place(&self) -> Place {
        Place { ell: self.ell, splitting: self.splitting, behavior: self.behavior }
    }
}

/// Applies the first rule that matches; unknown with every failed hypothesis otherwise.
pub fn classify_place(curve: &Curve, p: u64, place: &Place) -> DeltaRecord {
    let mut rec = DeltaRecord {
        ell: place.ell,
        splitting: place.splitting,
        residue_degree: place.residue_degree(),
        behavior: place.behavior,
        reduction: curve.reduction(place.ell),
        delta: Delta::Unknown,
        rule: None,
        cite: None,
        failed: Vec::new(),
        torsion_dim: None,
        norm_index_dim: None,
    };
    for rule in Rule::ALL {
        match apply_rule(rule, curve, p, place) {
            Outcome::Matched(m) => {
                rec.delta = m.delta;
                rec.rule = Some(rule);
                rec.cite = Some(rule.cite().to_string());
                rec.torsion_dim = m.torsion_dim;
                rec.norm_index_dim = m.norm_index_dim;
                rec.failed.clear();
                return rec;
            }
            Outcome::Failed(items) => rec.failed.extend(items.into_iter().map(|s| format!("{rule}: {s}"))),
            Outcome::NotApplicable => {}
        }
    }
    if rec.failed.is_empty() {
        let why = if place.ell == p { "v | p" } else { "v prime to p" };
        rec.failed.push(format!("no rule covers a ramified self-conjugate place with {why} here"));
    }
    rec
}

pub fn classify_delta(
    curve: &Curve,
    field: &QuadField,
    spec: &ExtensionSpec,
    ell: u64,
) -> Result<DeltaRecord, ParityError> {
    let place = Place::resolve(field, spec, ell)?;
    Ok(classify_place(curve, spec.p, &place))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity_engine::spec::PrimeBehavior;

    fn c37() -> Curve {
        Curve::new([0, 0, 1, -1, 0]).unwrap()
    }

    #[test]
    fn delta_serializes_as_number_or_word() {
        let v: Vec<Delta> = vec![Delta::Zero, Delta::One, Delta::Unknown];
        let s = serde_json_like(&v);
        assert_eq!(s, "[0,1,\"unknown\"]");
    }

    // Minimal serializer stand-in so the core crate does not need serde_json.
    fn serde_json_like(v: &[Delta]) -> String {
        let parts: Vec<String> = v
            .iter()
            .map(|d| match DeltaRepr::from(*d) {
                DeltaRepr::Num(n) => n.to_string(),
                DeltaRepr::Word(w) => format!("\"{w}\""),
            })
            .collect();
        format!("[{}]", parts.join(","))
    }

    #[test]
    fn split_prime_pair_cancels() {
        let e = c37();
        let k = QuadField::new(-7).unwrap();
        let spec = ExtensionSpec::maximal_dihedral(5, 1);
        // 37 ≡ 2 mod 7 is a square, so 37 splits in Q(√-7).
        let r = classify_delta(&e, &k, &spec, 37).unwrap();
        assert_eq!((r.splitting, r.delta, r.rule), (Splitting::Split, Delta::Zero, Some(Rule::R1)));
    }

    #[test]
    fn inert_ordinary_at_p() {
        let e = c37();
        let k = QuadField::new(-7).unwrap();
        let spec = ExtensionSpec::maximal_dihedral(5, 1);
        let r = classify_delta(&e, &k, &spec, 5).unwrap();
        assert_eq!(r.splitting, Splitting::Inert);
        assert_eq!(r.rule, Some(Rule::R4));
        assert_eq!(r.delta, Delta::Zero);
        // a_5 = -2, so #E(F_25) = 26 - (4 - 10) = 32, prime to 5.
        assert_eq!(r.norm_index_dim, Some(0));
    }

    #[test]
    fn unramified_self_conjugate_is_r2() {
        let e = c37();
        let k = QuadField::new(-7).unwrap();
        let spec = ExtensionSpec::explicit(5, 1, [(5, PrimeBehavior::SPLIT)]);
        let r = classify_delta(&e, &k, &spec, 5).unwrap();
        assert_eq!((r.rule, r.delta), (Some(Rule::R2), Delta::Zero));
    }

    #[test]
    fn ramified_both_rejected() {
        let e = c37();
        let k = QuadField::new(-7).unwrap();
        let spec = ExtensionSpec::explicit(5, 1, [(7, PrimeBehavior::RAMIFIED)]);
        assert_eq!(classify_delta(&e, &k, &spec, 7), Err(ParityError::RamifiedInBoth(7)));
    }

    #[test]
    fn bad_away_from_p_is_unknown() {
        let e = c37();
        // Any field where 37 is inert.
        let d = [-1i64, -2, 2, 3, 5, -3, 6, -5]
            .into_iter()
            .find(|&d| QuadField::new(d).unwrap().split_behavior(37).unwrap() == Splitting::Inert)
            .unwrap();
        let k = QuadField::new(d).unwrap();
        let spec = ExtensionSpec::explicit(19, 1, [(37, PrimeBehavior::RAMIFIED)]);
        let r = classify_delta(&e, &k, &spec, 37).unwrap();
        assert_eq!(r.delta, Delta::Unknown);
        assert!(r.failed.iter().any(|s| s.contains("good reduction at 37")), "{:?}", r.failed);
    }

    #[test]
    fn additive_at_p_is_unknown() {
        // y² = x³ + 1 has additive reduction at 3; 3 is inert in Q(√-1).
        let e = Curve::new([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(e.reduction(3), ReductionType::Additive);
        let k = QuadField::new(-1).unwrap();
        let r = classify_delta(&e, &k, &ExtensionSpec::maximal_dihedral(3, 1), 3).unwrap();
        assert_eq!(r.delta, Delta::Unknown);
        assert_eq!(r.failed.len(), 3, "{:?}", r.failed);
    }

    #[test]
    fn delta_sum() {
        assert_eq!(Delta::One.add(Delta::One), Delta::Zero);
        assert_eq!(Delta::One.add(Delta::Zero), Delta::One);
        assert_eq!(Delta::Zero.add(Delta::Unknown), Delta::Unknown);
    }
}
