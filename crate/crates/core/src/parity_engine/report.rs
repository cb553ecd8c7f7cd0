use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ec_arith::{Curve, PKind, ReductionType};

use super::field::{QuadField, Splitting};
use super::rules::{classify_place, Delta, DeltaRecord, Place, Rule};
use super::spec::{Assertions, ExtensionSpec, FBehavior, Mode, Parity};
use super::ParityError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityValue {
    Even,
    Odd,
    Unknown,
}

impl From<Parity> for ParityValue {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => ParityValue::Even,
            Parity::Odd => ParityValue::Odd,
        }
    }
}

impl ParityValue {
    pub fn known(self) -> Option<Parity> {
        match self {
            ParityValue::Even => Some(Parity::Even),
            ParityValue::Odd => Some(Parity::Odd),
            ParityValue::Unknown => None,
        }
    }
}

impl fmt::Display for ParityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityValue::Even => "even",
            ParityValue::Odd => "odd",
            ParityValue::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParitySource {
    /// From the quadratic character at `-N_E`.
    Computed,
    UserAsserted,
    None,
}

/// Parity of `corank Sel_{p^∞}(E/K)` and where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseParity {
    pub value: ParityValue,
    pub source: ParitySource,
    /// `χ_M(-N_E)`.
    pub chi_minus_n: i32,
    /// Hypotheses of the computed path that fail.
    pub failed: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

fn bad_primes(curve: &Curve) -> Vec<u64> {
    curve.bad.iter().map(|r| r.prime).collect()
}

/// `χ_M(-N_E)` from the factored conductor.
pub fn chi_minus_conductor(curve: &Curve, field: &QuadField) -> i32 {
    curve.bad.iter().fold(field.chi(-1), |acc, r| {
        acc * field.chi(r.prime as i128).pow(r.conductor_exponent)
    })
}

/// Hypotheses under which `χ_M(-N_E)` decides the parity.
pub fn computed_parity_hypotheses(curve: &Curve, field: &QuadField, p: u64) -> Vec<Hypothesis> {
    let bad = bad_primes(curve);
    let disc = field.discriminant;
    vec![
        Hypothesis::new("p > 3", p > 3),
        Hypothesis::new(format!("gcd(p, disc(K)) = gcd({p}, {disc}) = 1"), disc % p as i64 != 0),
        Hypothesis::new(format!("gcd(p, N_E) = 1 (p = {p})"), !bad.contains(&p)),
        Hypothesis::new(
            format!("gcd(disc(K), N_E) = 1 (N_E = {})", curve.conductor),
            bad.iter().all(|&l| disc % l as i64 != 0),
        ),
    ]
}

pub fn base_parity(curve: &Curve, field: &QuadField, p: u64, assertions: &Assertions) -> BaseParity {
    let chi = chi_minus_conductor(curve, field);
    let hyps = computed_parity_hypotheses(curve, field, p);
    let failed: Vec<String> = hyps.iter().filter(|h| !h.pass).map(|h| h.name.clone()).collect();
    let asserted = assertions.implied_parity();
    if failed.is_empty() {
        let value = Parity::from_odd(chi == -1);
        let note = asserted
            .filter(|&a| a != value)
            .map(|a| format!("asserted parity {} contradicts the computed value; ignored", ParityValue::from(a)));
        return BaseParity { value: value.into(), source: ParitySource::Computed, chi_minus_n: chi, failed, note };
    }
    match asserted {
        Some(a) => BaseParity { value: a.into(), source: ParitySource::UserAsserted, chi_minus_n: chi, failed, note: None },
        None => BaseParity { value: ParityValue::Unknown, source: ParitySource::None, chi_minus_n: chi, failed, note: None },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub pass: bool,
}

impl Hypothesis {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Self { name: name.into(), pass }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtLeast,
    Equal,
}

/// `corank_{Z_p} Sel_{p^∞}(E/F)` compared with `value`, plus the base corank if flagged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub relation: Relation,
    pub value: u64,
    pub plus_base_corank: bool,
}

impl Bound {
    fn statement(&self) -> String {
        let rel = match self.relation {
            Relation::AtLeast => "≥",
            Relation::Equal => "=",
        };
        if self.plus_base_corank {
            format!("corank {rel} corank(E/K) + {}", self.value)
        } else {
            format!("corank {rel} {}", self.value)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// Every cyclic layer has the base parity.
    ParityTransfer,
    /// Odd base corank forces corank at least `[F:K]`.
    CorankLowerBound,
    /// Base Selmer `Q_p/Z_p` with the local conditions forces corank `[F:K]`.
    CorankExact,
    /// Maximal dihedral extension with `χ_M(-N_E) = -1`.
    DihedralTowerBound,
    /// Split multiplicative at `p`, total parity odd.
    SplitMultLowerBound,
    /// Split multiplicative at `p`, base Selmer finite.
    SplitMultFiniteBound,
    /// Split multiplicative at `p`, base Selmer zero.
    SplitMultExact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub theorem: TheoremId,
    pub hypotheses: Vec<Hypothesis>,
    /// Present only when every hypothesis passes.
    pub statement: Option<String>,
    pub bound: Option<Bound>,
}

impl Conclusion {
    fn build(theorem: TheoremId, hypotheses: Vec<Hypothesis>, statement: String, bound: Option<Bound>) -> Self {
        let ok = hypotheses.iter().all(|h| h.pass);
        Self {
            theorem,
            hypotheses,
            statement: ok.then_some(statement),
            bound: if ok { bound } else { None },
        }
    }

    pub fn holds(&self) -> bool {
        self.hypotheses.iter().all(|h| h.pass)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.hypotheses.iter().filter(|h| !h.pass).map(|h| h.name.as_str()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub coefficients: [i128; 5],
    pub minimal: [i128; 5],
    pub conductor: String,
    pub discriminant: String,
}

impl CurveSummary {
    pub fn new(curve: &Curve) -> Self {
        Self {
            coefficients: curve.input.as_i128().expect("input coefficients fit in i128"),
            minimal: curve.coeffs(),
            conductor: curve.conductor.to_string(),
            discriminant: curve.discriminant.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub curve: CurveSummary,
    pub field: QuadField,
    pub p: u64,
    pub n: u32,
    pub degree: u64,
    pub mode: Mode,
    pub assertions: Assertions,
    pub base_parity: BaseParity,
    pub places: Vec<DeltaRecord>,
    pub sum_mod_2: Delta,
    /// `|𝔖_p|` for the split multiplicative analysis.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s_p: Option<usize>,
    /// Conclusions whose hypotheses all pass.
    pub conclusions: Vec<Conclusion>,
    /// Conclusions with at least one failed hypothesis.
    pub withheld: Vec<Conclusion>,
}

impl ParityReport {
    pub fn conclusion(&self, t: TheoremId) -> Option<&Conclusion> {
        self.conclusions.iter().find(|c| c.theorem == t)
    }

    pub fn has_unknown(&self) -> bool {
        self.sum_mod_2 == Delta::Unknown || self.base_parity.value == ParityValue::Unknown
    }

    pub fn record(&self, ell: u64) -> Option<&DeltaRecord> {
        self.places.iter().find(|r| r.ell == ell)
    }

    fn push(&mut self, c: Conclusion) {
        if c.holds() {
            self.conclusions.push(c);
        } else {
            self.withheld.push(c);
        }
    }
}

/// Primes above `p`, ramified in `F/K`, of bad reduction, or named in the spec.
pub fn support(curve: &Curve, field: &QuadField, spec: &ExtensionSpec) -> Vec<u64> {
    let mut s: BTreeSet<u64> = bad_primes(curve).into_iter().collect();
    s.insert(spec.p);
    s.extend(spec.ramified_primes(field));
    s.extend(spec.behavior.keys().copied());
    s.into_iter().collect()
}

struct Context<'a> {
    curve: &'a Curve,
    field: &'a QuadField,
    spec: &'a ExtensionSpec,
    report: ParityReport,
}

impl<'a> Context<'a> {
    fn new(
        curve: &'a Curve,
        field: &'a QuadField,
        spec: &'a ExtensionSpec,
        assertions: &Assertions,
    ) -> Result<Self, ParityError> {
        spec.validate(field)?;
        let places: Vec<Place> =
            support(curve, field, spec).into_iter().map(|l| Place::resolve(field, spec, l)).collect::<Result<_, _>>()?;
        let records: Vec<DeltaRecord> = places.par_iter().map(|pl| classify_place(curve, spec.p, pl)).collect();
        let sum = records.iter().fold(Delta::Zero, |acc, r| acc.add(r.delta));
        let report = ParityReport {
            curve: CurveSummary::new(curve),
            field: *field,
            p: spec.p,
            n: spec.n,
            degree: spec.degree().expect("validated"),
            mode: spec.mode,
            assertions: *assertions,
            base_parity: base_parity(curve, field, spec.p, assertions),
            places: records,
            sum_mod_2: sum,
            s_p: None,
            conclusions: Vec::new(),
            withheld: Vec::new(),
        };
        Ok(Self { curve, field, spec, report })
    }

    fn degree(&self) -> u64 {
        self.report.degree
    }

    fn sigma(&self) -> impl Iterator<Item = &DeltaRecord> {
        self.report.places.iter().filter(|r| r.place().is_sigma())
    }

    fn transfer_hypotheses(&self) -> Vec<Hypothesis> {
        let mut h = vec![Hypothesis::new("F/K abelian p-extension, dihedral over Q (extension data validated)", true)];
        let sigma: Vec<&DeltaRecord> = self.sigma().collect();
        if sigma.is_empty() {
            h.push(Hypothesis::new("no ramified self-conjugate places", true));
        }
        for r in sigma {
            let ok = matches!(r.rule, Some(Rule::R3 | Rule::R4 | Rule::R5));
            h.push(Hypothesis::new(
                format!(
                    "ramified self-conjugate place above {}: good reduction prime to p, good ordinary, or the supersingular condition",
                    r.ell
                ),
                ok,
            ));
        }
        h
    }

    fn base_is(&self, p: Parity) -> Hypothesis {
        Hypothesis::new(
            format!("corank Sel(E/K) is {} (found: {})", ParityValue::from(p), self.report.base_parity.value),
            self.report.base_parity.value == p.into(),
        )
    }

    /// Local conditions for exactness at every place except those above `p`
    /// when `skip_p`.
    fn exact_local_hypotheses(&self, skip_p: bool) -> Vec<Hypothesis> {
        let p = self.spec.p;
        let mut h = Vec::new();
        for r in &self.report.places {
            if r.ell == p || r.behavior != FBehavior::Ramified {
                continue;
            }
            let dim = self.curve.torsion_dim_mod_p(r.ell, r.residue_degree, p);
            let name = match &dim {
                Ok(d) => format!("E(K_v)[p] = 0 at the places above {} (dim {d})", r.ell),
                Err(e) => format!("E(K_v)[p] = 0 at the places above {} ({e})", r.ell),
            };
            h.push(Hypothesis::new(name, dim == Ok(0)));
        }
        for l in bad_primes(self.curve) {
            if skip_p && l == p {
                continue;
            }
            let r = self.report.record(l).expect("bad primes are in the support");
            h.push(Hypothesis::new(
                format!("bad prime {l} splits completely in F (behavior: {})", r.behavior),
                r.behavior == FBehavior::SplitsCompletely,
            ));
        }
        if !skip_p {
            let f = self.report.record(p).expect("p is in the support").residue_degree;
            let (ordinary, non_anom) = match self.curve.classify_at_p(p, f) {
                Ok(c) => (c.kind == PKind::Ordinary, !c.anomalous),
                Err(_) => (false, false),
            };
            h.push(Hypothesis::new(format!("good ordinary reduction at {p}"), ordinary));
            h.push(Hypothesis::new(format!("E(k_v)[p] = 0 on the residue field of degree {f} above {p}"), ordinary && non_anom));
        }
        h
    }

    fn coprimality(&self) -> Vec<Hypothesis> {
        computed_parity_hypotheses(self.curve, self.field, self.spec.p)
    }
}

/// Parity transfer, lower bound, exactness, and the dihedral-tower bound.
pub fn predict(
    curve: &Curve,
    field: &QuadField,
    spec: &ExtensionSpec,
    assertions: &Assertions,
) -> Result<ParityReport, ParityError> {
    let mut cx = Context::new(curve, field, spec, assertions)?;
    let deg = cx.degree();

    let transfer = cx.transfer_hypotheses();
    let stmt = match cx.report.base_parity.value {
        ParityValue::Unknown => "every cyclic layer L has R_L-corank of Sel(A_L/K) congruent to corank Sel(E/K) mod 2".to_string(),
        v => format!("every cyclic layer L has R_L-corank of Sel(A_L/K) {v}"),
    };
    let c1 = Conclusion::build(TheoremId::ParityTransfer, transfer.clone(), stmt, None);

    let mut h2 = transfer;
    h2.push(cx.base_is(Parity::Odd));
    let b2 = Bound { relation: Relation::AtLeast, value: deg, plus_base_corank: false };
    let c2 = Conclusion::build(TheoremId::CorankLowerBound, h2, b2.statement(), Some(b2));

    let mut h3 = cx.exact_local_hypotheses(false);
    h3.push(Hypothesis::new("Sel(E/K) = Q_p/Z_p (asserted)", assertions.cofree_rank_one));
    let b3 = Bound { relation: Relation::Equal, value: deg, plus_base_corank: false };
    let c3 = Conclusion::build(TheoremId::CorankExact, h3, b3.statement(), Some(b3));

    let mut h4 = vec![Hypothesis::new("maximal dihedral mode", spec.mode == Mode::MaximalDihedral)];
    h4.extend(cx.coprimality());
    h4.push(Hypothesis::new(
        format!("chi_K(-N_E) = -1 (found {})", cx.report.base_parity.chi_minus_n),
        cx.report.base_parity.chi_minus_n == -1,
    ));
    let b4 = Bound { relation: Relation::AtLeast, value: deg, plus_base_corank: false };
    let c4 = Conclusion::build(TheoremId::DihedralTowerBound, h4, b4.statement(), Some(b4));

    for c in [c1, c2, c3, c4] {
        cx.report.push(c);
    }
    Ok(cx.report)
}

/// Number of places above `p` with `v = v^c` that are neither good ordinary
/// nor supersingular with the extra conditions.
pub fn s_p_places(curve: &Curve, field: &QuadField, p: u64) -> Result<Vec<u64>, ParityError> {
    let s = field.split_behavior(p)?;
    if !s.is_self_conjugate() {
        return Ok(Vec::new());
    }
    let covered = curve.has_good_reduction(p)
        && curve
            .classify_at_p(p, s.residue_degree())
            .map(|c| c.kind == PKind::Ordinary || c.par5_ok)
            .unwrap_or(false);
    Ok(if covered { Vec::new() } else { vec![p] })
}

/// Conclusions of the split multiplicative analysis from `|𝔖_p|`, the base
/// parity and the assertions. `exact_local` holds the local conditions for
/// equality at the places outside `𝔖_p`.
pub fn split_mult_conclusions(
    base: ParityValue,
    s_p: usize,
    assertions: &Assertions,
    exact_local: Vec<Hypothesis>,
    degree: u64,
) -> Vec<Conclusion> {
    let bound = |relation, plus| Bound { relation, value: degree - 1, plus_base_corank: plus };
    let consistent = Hypothesis::new(
        format!("asserted Selmer data consistent with base parity {base}"),
        assertions.is_consistent() && !((assertions.finite || assertions.zero) && base == ParityValue::Odd),
    );

    let h1 = vec![
        Hypothesis::new(format!("corank Sel(E/K) parity known (found: {base})"), base != ParityValue::Unknown),
        Hypothesis::new(
            format!("corank Sel(E/K) + |S_p| odd (|S_p| = {s_p})"),
            base.known().is_some_and(|b| b.is_odd() != (s_p % 2 == 1)),
        ),
    ];
    let b1 = bound(Relation::AtLeast, true);
    let c1 = Conclusion::build(TheoremId::SplitMultLowerBound, h1, b1.statement(), Some(b1));

    let h2 = vec![
        Hypothesis::new("Sel(E/K) finite (asserted)", assertions.finite || assertions.zero),
        Hypothesis::new(format!("|S_p| = {s_p} odd"), s_p % 2 == 1),
        consistent.clone(),
    ];
    let b2 = bound(Relation::AtLeast, false);
    let c2 = Conclusion::build(TheoremId::SplitMultFiniteBound, h2, b2.statement(), Some(b2));

    let mut h3 = vec![
        Hypothesis::new(format!("|S_p| = 1 (found {s_p})"), s_p == 1),
        Hypothesis::new("Sel(E/K) = 0 (asserted)", assertions.zero),
        consistent,
    ];
    h3.extend(exact_local);
    let b3 = bound(Relation::Equal, false);
    let c3 = Conclusion::build(TheoremId::SplitMultExact, h3, b3.statement(), Some(b3));
    vec![c1, c2, c3]
}

/// Predictions when some place above `p` has split multiplicative reduction
/// and is totally ramified in `F`.
pub fn smult_predict(
    curve: &Curve,
    field: &QuadField,
    spec: &ExtensionSpec,
    assertions: &Assertions,
) -> Result<ParityReport, ParityError> {
    let mut cx = Context::new(curve, field, spec, assertions)?;
    let p = spec.p;
    for r in &cx.report.places {
        if r.ell != p
            && r.reduction != ReductionType::Good
            && r.splitting != Splitting::Split
            && r.behavior == FBehavior::Ramified
        {
            return Err(ParityError::SplitMultPrecondition {
                ell: r.ell,
                reason: "a non-split bad place prime to p must be unramified in F".into(),
            });
        }
    }
    let s_p = s_p_places(curve, field, p)?;
    for &l in &s_p {
        let r = cx.report.record(l).expect("p is in the support");
        if curve.reduction(l) != ReductionType::MultiplicativeSplit {
            return Err(ParityError::SplitMultPrecondition {
                ell: l,
                reason: format!("split multiplicative reduction (found {})", curve.reduction(l)),
            });
        }
        if r.behavior != FBehavior::Ramified {
            return Err(ParityError::SplitMultPrecondition {
                ell: l,
                reason: format!("total ramification in F (found {})", r.behavior),
            });
        }
    }
    let exact = cx.exact_local_hypotheses(!s_p.is_empty());
    let base = cx.report.base_parity.value;
    let deg = cx.degree();
    cx.report.s_p = Some(s_p.len());
    for c in split_mult_conclusions(base, s_p.len(), assertions, exact, deg) {
        cx.report.push(c);
    }
    Ok(cx.report)
}

/// Whether the split multiplicative analysis is the relevant one.
pub fn wants_split_mult(curve: &Curve, field: &QuadField, p: u64) -> bool {
    curve.reduction(p) == ReductionType::MultiplicativeSplit
        && field.split_behavior(p).is_ok_and(|s| s.is_self_conjugate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity_engine::spec::PrimeBehavior;

    fn c37() -> Curve {
        Curve::new([0, 0, 1, -1, 0]).unwrap()
    }

    fn c11() -> Curve {
        Curve::new([0, -1, 1, -10, -20]).unwrap()
    }

    #[test]
    fn odd_base_gives_lower_bound() {
        let k = QuadField::new(-7).unwrap();
        let r = predict(&c37(), &k, &ExtensionSpec::maximal_dihedral(5, 1), &Assertions::default()).unwrap();
        assert_eq!(r.base_parity.chi_minus_n, -1);
        assert_eq!((r.base_parity.value, r.base_parity.source), (ParityValue::Odd, ParitySource::Computed));
        assert_eq!(r.places.iter().map(|x| x.ell).collect::<Vec<_>>(), vec![5, 37]);
        assert!(r.places.iter().all(|x| x.rule.is_some()));
        assert_eq!(r.sum_mod_2, Delta::Zero);
        for t in [TheoremId::ParityTransfer, TheoremId::CorankLowerBound, TheoremId::DihedralTowerBound] {
            let c = r.conclusion(t).unwrap_or_else(|| panic!("{t:?} missing: {:?}", r.withheld));
            if t != TheoremId::ParityTransfer {
                assert_eq!(c.statement.as_deref(), Some("corank ≥ 5"));
                assert_eq!(c.bound.unwrap().value, 5);
            }
        }
        assert!(r.conclusion(TheoremId::CorankExact).is_none());
    }

    #[test]
    fn even_base_withholds_bound() {
        // χ_{-8}(-37) = χ(-1)·χ(37) = (-1)(-1) = 1.
        let k = QuadField::new(-2).unwrap();
        let r = predict(&c37(), &k, &ExtensionSpec::maximal_dihedral(5, 1), &Assertions::default()).unwrap();
        assert_eq!(r.base_parity.value, ParityValue::Even);
        assert!(r.conclusion(TheoremId::ParityTransfer).is_some());
        assert!(r.conclusion(TheoremId::CorankLowerBound).is_none());
        let w = r.withheld.iter().find(|c| c.theorem == TheoremId::CorankLowerBound).unwrap();
        assert_eq!(w.failed().len(), 1);
        assert!(w.statement.is_none() && w.bound.is_none());
    }

    #[test]
    fn p_three_needs_override() {
        let k = QuadField::new(-7).unwrap();
        // 3 is inert in Q(√-7).
        let spec = ExtensionSpec::maximal_dihedral(3, 1);
        let r = predict(&c37(), &k, &spec, &Assertions::default()).unwrap();
        assert_eq!(r.base_parity.value, ParityValue::Unknown);
        assert_eq!(r.base_parity.failed, vec!["p > 3".to_string()]);
        let a = Assertions { corank_parity: Some(Parity::Odd), ..Default::default() };
        let r = predict(&c37(), &k, &spec, &a).unwrap();
        assert_eq!((r.base_parity.value, r.base_parity.source), (ParityValue::Odd, ParitySource::UserAsserted));
    }

    #[test]
    fn exactness_needs_bad_primes_split() {
        let k = QuadField::new(-7).unwrap();
        let a = Assertions { cofree_rank_one: true, ..Default::default() };
        let spec = ExtensionSpec::explicit(5, 1, [(5, PrimeBehavior::RAMIFIED)]);
        let r = predict(&c37(), &k, &spec, &a).unwrap();
        let w = r.withheld.iter().find(|c| c.theorem == TheoremId::CorankExact).unwrap();
        assert_eq!(w.failed(), vec!["bad prime 37 splits completely in F (behavior: unramified)"]);

        let spec = spec.with(37, PrimeBehavior::SPLIT);
        let r = predict(&c37(), &k, &spec, &a).unwrap();
        let c = r.conclusion(TheoremId::CorankExact).unwrap();
        assert_eq!(c.statement.as_deref(), Some("corank = 5"));
        // Explicit mode is not the maximal dihedral tower.
        assert!(r.conclusion(TheoremId::DihedralTowerBound).is_none());
    }

    #[test]
    fn split_mult_at_p() {
        let e = c11();
        assert_eq!(e.reduction(11), ReductionType::MultiplicativeSplit);
        let k = QuadField::new(-1).unwrap();
        assert!(wants_split_mult(&e, &k, 11));
        let spec = ExtensionSpec::maximal_dihedral(11, 1);
        let fin = Assertions { finite: true, ..Default::default() };
        let r = smult_predict(&e, &k, &spec, &fin).unwrap();
        assert_eq!(r.s_p, Some(1));
        assert_eq!(r.record(11).unwrap().rule, Some(Rule::R6));
        assert_eq!(r.sum_mod_2, Delta::One);
        assert_eq!(r.base_parity.source, ParitySource::UserAsserted);
        let c = r.conclusion(TheoremId::SplitMultFiniteBound).unwrap();
        assert_eq!(c.statement.as_deref(), Some("corank ≥ 10"));
        assert!(r.conclusion(TheoremId::SplitMultExact).is_none());

        let zero = Assertions { zero: true, ..Default::default() };
        let r = smult_predict(&e, &k, &spec, &zero).unwrap();
        assert_eq!(r.conclusion(TheoremId::SplitMultExact).unwrap().statement.as_deref(), Some("corank = 10"));
        // Even base plus one split multiplicative place is odd.
        assert!(r.conclusion(TheoremId::SplitMultLowerBound).is_some());
    }

    #[test]
    fn split_mult_precondition() {
        let k = QuadField::new(-1).unwrap();
        let spec = ExtensionSpec::maximal_dihedral(11, 1).with(11, PrimeBehavior::SPLIT);
        let err = smult_predict(&c11(), &k, &spec, &Assertions::default()).unwrap_err();
        assert!(matches!(err, ParityError::SplitMultPrecondition { ell: 11, .. }), "{err}");
    }

    #[test]
    fn split_mult_parity_arithmetic() {
        let a = Assertions::default();
        let cs = split_mult_conclusions(ParityValue::Odd, 2, &a, vec![], 5);
        assert!(cs[0].holds() && !cs[1].holds() && !cs[2].holds());
        assert_eq!(cs[0].statement.as_deref(), Some("corank ≥ corank(E/K) + 4"));
        let cs = split_mult_conclusions(ParityValue::Even, 2, &a, vec![], 5);
        assert!(!cs[0].holds());
        let cs = split_mult_conclusions(ParityValue::Unknown, 1, &a, vec![], 5);
        assert!(!cs[0].holds());
    }

    // Adding assertions never removes a conclusion.
    #[test]
    fn monotone_in_assertions() {
        let e = c37();
        let k = QuadField::new(-7).unwrap();
        let spec = ExtensionSpec::explicit(5, 1, [(5, PrimeBehavior::RAMIFIED), (37, PrimeBehavior::SPLIT)]);
        let weak = Assertions::default();
        let strong = Assertions { cofree_rank_one: true, ..weak };
        let held = |a: &Assertions| -> Vec<TheoremId> {
            predict(&e, &k, &spec, a).unwrap().conclusions.iter().map(|c| c.theorem).collect()
        };
        let (w, s) = (held(&weak), held(&strong));
        assert!(w.iter().all(|t| s.contains(t)), "{w:?} vs {s:?}");
        assert!(s.len() > w.len());
    }
}
