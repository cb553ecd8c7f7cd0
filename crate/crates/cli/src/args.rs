use clap::{Args, Parser, Subcommand, ValueEnum};

use dihedral_parity::arith::is_odd_prime;
use dihedral_parity::parity_engine::{Assertions, ExtensionSpec, Parity, PrimeBehavior};

#[derive(Parser, Debug)]
#[command(name = "dparity", version, about = "Selmer parity machinery for dihedral p-extensions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Local invariants, base parity and rank predictions for E over F/K.
    Analyze(AnalyzeArgs),
    /// The local invariant at the places above one prime.
    Delta(DeltaArgs),
    /// Reduction types and Frobenius traces of a curve.
    CurveLocal(CurveLocalArgs),
    /// Property campaign on random toy Selmer systems.
    ToySelmer(ToySelmerArgs),
    /// Invariant checks for the cyclotomic pairing algebra.
    CyclotomicCheck(CyclotomicArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Output {
    /// Emit one JSON document instead of text.
    #[arg(long)]
    pub json: bool,
    /// Exit with status 2 when some outcome is unknown.
    #[arg(long)]
    pub strict: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    MaximalDihedral,
    Explicit,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analysis {
    /// Split multiplicative analysis when `p` is split multiplicative and not split in K.
    Auto,
    General,
    SplitMult,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Weierstrass coefficients a1,a2,a3,a4,a6.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    /// Squarefree d with K = Q(sqrt(d)).
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    /// Odd prime p.
    #[arg(long)]
    pub p: u64,
    /// [F:K] = p^n.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::MaximalDihedral)]
    pub mode: ModeArg,
    /// Behavior of the places above a prime: ELL:ramified, ELL:split or ELL:unramified.
    #[arg(long = "behavior", value_name = "ELL:KIND")]
    pub behavior: Vec<String>,
    /// Asserted parity of corank Sel(E/K).
    #[arg(long, value_enum)]
    pub corank_parity: Option<ParityArg>,
    /// Assert Sel(E/K) = Q_p/Z_p.
    #[arg(long)]
    pub sel_cofree_rank_one: bool,
    /// Assert Sel(E/K) finite.
    #[arg(long)]
    pub sel_finite: bool,
    /// Assert Sel(E/K) = 0.
    #[arg(long)]
    pub sel_zero: bool,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, value_enum, default_value_t = Analysis::Auto)]
    pub analysis: Analysis,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Rational prime below the place.
    #[arg(long)]
    pub ell: u64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct CurveLocalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    /// Good primes up to this bound are listed along with every bad prime.
    #[arg(long, default_value_t = 50)]
    pub max_prime: u64,
    /// Also report dim E(F_ell)[p].
    #[arg(long)]
    pub p: Option<u64>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct ToySelmerArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub max_places: usize,
    #[arg(long, default_value_t = 4)]
    pub max_d: usize,
    #[arg(long, default_value_t = 3)]
    pub max_z: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct CyclotomicArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Truncation exponent for R/p^m.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: Output,
}

pub fn parse_curve(s: &str) -> Result<[i64; 5], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(format!("curve must be five comma-separated integers, got {}", parts.len()));
    }
    let mut a = [0i64; 5];
    for (slot, part) in a.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| format!("curve coefficient {part:?} is not an integer"))?;
    }
    Ok(a)
}

pub fn parse_behavior(s: &str) -> Result<(u64, PrimeBehavior), String> {
    let (ell, kind) = s.split_once(':').ok_or_else(|| format!("behavior {s:?} must look like ELL:KIND"))?;
    let ell: u64 = ell.trim().parse().map_err(|_| format!("behavior prime {ell:?} is not a positive integer"))?;
    let b = match kind.trim() {
        "ramified" => PrimeBehavior::RAMIFIED,
        "split" => PrimeBehavior::SPLIT,
        "unramified" => PrimeBehavior::UNRAMIFIED,
        other => return Err(format!("behavior kind {other:?} must be ramified, split or unramified")),
    };
    Ok((ell, b))
}

pub fn check_odd_prime(name: &str, p: u64) -> Result<(), String> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(format!("{name} must be an odd prime (got {p})"))
    }
}

impl FieldArgs {
    pub fn spec(&self) -> Result<ExtensionSpec, String> {
        check_odd_prime("p", self.p)?;
        if self.n == 0 {
            return Err("n must be at least 1".into());
        }
        let mut spec = match self.mode {
            ModeArg::MaximalDihedral => ExtensionSpec::maximal_dihedral(self.p, self.n),
            ModeArg::Explicit => ExtensionSpec::explicit(self.p, self.n, []),
        };
        for b in &self.behavior {
            let (ell, pb) = parse_behavior(b)?;
            if spec.behavior.insert(ell, pb).is_some() {
                return Err(format!("behavior for {ell} given twice"));
            }
        }
        Ok(spec)
    }

    pub fn assertions(&self) -> Assertions {
        Assertions {
            corank_parity: self.corank_parity.map(|p| match p {
                ParityArg::Even => Parity::Even,
                ParityArg::Odd => Parity::Odd,
            }),
            cofree_rank_one: self.sel_cofree_rank_one,
            finite: self.sel_finite,
            zero: self.sel_zero,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_parsing() {
        assert_eq!(parse_curve("0,0,1,-1,0"), Ok([0, 0, 1, -1, 0]));
        assert_eq!(parse_curve(" 1, 2,3,4 ,5"), Ok([1, 2, 3, 4, 5]));
        assert!(parse_curve("0,0,1,-1").is_err());
        assert!(parse_curve("0,0,1,x,0").is_err());
    }

    #[test]
    fn behavior_parsing() {
        assert_eq!(parse_behavior("37:split"), Ok((37, PrimeBehavior::SPLIT)));
        assert_eq!(parse_behavior("5:ramified"), Ok((5, PrimeBehavior::RAMIFIED)));
        assert!(parse_behavior("5").is_err());
        assert!(parse_behavior("5:inert").is_err());
        assert!(parse_behavior("-5:split").is_err());
    }
}
