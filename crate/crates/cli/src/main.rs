mod args;
mod render;

use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use dihedral_parity::arith::is_prime;
use dihedral_parity::cyclotomic::{run_check, CheckConfig};
use dihedral_parity::ec_arith::{Curve, ReductionType};
use dihedral_parity::parity_engine::{
    classify_delta, predict, smult_predict, wants_split_mult, CurveSummary, Delta, QuadField,
};
use dihedral_parity::selmer_lab::{run_campaign, CampaignConfig};

use args::{
    check_odd_prime, parse_curve, Analysis, AnalyzeArgs, Cli, Command, CurveLocalArgs, CyclotomicArgs,
    DeltaArgs, FieldArgs, Output, ToySelmerArgs,
};
use render::LocalRow;

/// Largest `--max-prime` accepted by `curve-local`.
const LOCAL_TABLE_BOUND: u64 = 100_000;

struct Done {
    doc: Value,
    text: String,
    /// Exit status: 0, 1 on failed checks, 2 on unknown outcomes under `--strict`.
    code: u8,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn load(f: &FieldArgs) -> Result<(Curve, QuadField), String> {
    let curve = Curve::new(parse_curve(&f.curve)?).map_err(|e| format!("invalid curve: {e}"))?;
    let field = QuadField::new(f.d).map_err(|e| e.to_string())?;
    Ok((curve, field))
}

fn analyze(a: &AnalyzeArgs) -> Result<Done, String> {
    let (curve, field) = load(&a.field)?;
    let spec = a.field.spec()?;
    let asserted = a.field.assertions();
    let split_mult = match a.analysis {
        Analysis::Auto => wants_split_mult(&curve, &field, spec.p),
        Analysis::General => false,
        Analysis::SplitMult => true,
    };
    let report = if split_mult {
        smult_predict(&curve, &field, &spec, &asserted)
    } else {
        predict(&curve, &field, &spec, &asserted)
    }
    .map_err(|e| e.to_string())?;
    let code = if a.out.strict && report.has_unknown() { 2 } else { 0 };
    Ok(Done { doc: to_value(&report), text: render::report(&report), code })
}

fn delta(a: &DeltaArgs) -> Result<Done, String> {
    let (curve, field) = load(&a.field)?;
    let spec = a.field.spec()?;
    spec.validate(&field).map_err(|e| e.to_string())?;
    let rec = classify_delta(&curve, &field, &spec, a.ell).map_err(|e| e.to_string())?;
    let code = if a.out.strict && rec.delta == Delta::Unknown { 2 } else { 0 };
    Ok(Done { doc: to_value(&rec), text: render::delta(&rec), code })
}

fn local_row(curve: &Curve, ell: u64, p: Option<u64>) -> Result<LocalRow, String> {
    let Some(bad) = curve.local(ell) else {
        let a = curve.frobenius(ell).map_err(|e| e.to_string())?.a_ell;
        let count = (ell as i64 + 1 - a) as u64;
        let p_torsion_dim = match p {
            Some(p) if p != ell => Some(curve.torsion_dim_mod_p(ell, 1, p).map_err(|e| e.to_string())?),
            _ => None,
        };
        return Ok(LocalRow {
            prime: ell,
            reduction: ReductionType::Good.to_string(),
            kodaira: "I0".into(),
            conductor_exponent: 0,
            a_ell: a,
            count: Some(count),
            anomalous: count % ell == 0,
            supersingular: a.rem_euclid(ell as i64) == 0,
            p_torsion_dim,
        });
    };
    let a_ell = match bad.kind {
        ReductionType::MultiplicativeSplit => 1,
        ReductionType::MultiplicativeNonsplit => -1,
        _ => 0,
    };
    Ok(LocalRow {
        prime: ell,
        reduction: bad.kind.to_string(),
        kodaira: bad.kodaira.to_string(),
        conductor_exponent: bad.conductor_exponent,
        a_ell,
        count: None,
        anomalous: false,
        supersingular: false,
        p_torsion_dim: None,
    })
}

fn curve_local(a: &CurveLocalArgs) -> Result<Done, String> {
    let curve = Curve::new(parse_curve(&a.curve)?).map_err(|e| format!("invalid curve: {e}"))?;
    if a.max_prime > LOCAL_TABLE_BOUND {
        return Err(format!("max-prime must be at most {LOCAL_TABLE_BOUND}"));
    }
    if let Some(p) = a.p {
        check_odd_prime("p", p)?;
    }
    let mut primes: Vec<u64> = (2..=a.max_prime).filter(|&l| is_prime(l as u128)).collect();
    primes.extend(curve.bad.iter().map(|r| r.prime));
    primes.sort_unstable();
    primes.dedup();
    let rows = primes.iter().map(|&l| local_row(&curve, l, a.p)).collect::<Result<Vec<_>, _>>()?;
    let summary = CurveSummary::new(&curve);
    let list = |a: &[i128; 5]| a.map(|x| x.to_string()).join(",");
    let header = format!(
        "curve [{}]  minimal [{}]  conductor {}  discriminant {}",
        list(&summary.coefficients),
        list(&summary.minimal),
        summary.conductor,
        summary.discriminant
    );
    let text = render::curve_local(&header, &rows);
    let doc = json!({ "curve": summary, "primes": rows });
    Ok(Done { doc, text, code: 0 })
}

fn toy_selmer(a: &ToySelmerArgs) -> Result<Done, String> {
    check_odd_prime("p", a.p)?;
    if a.trials == 0 || a.max_places == 0 || a.max_d == 0 {
        return Err("trials, max-places and max-d must be positive".into());
    }
    let cfg = CampaignConfig {
        p: a.p,
        trials: a.trials,
        max_places: a.max_places,
        max_d: a.max_d,
        max_z: a.max_z,
        seed: a.seed,
    };
    let s = run_campaign(&cfg);
    let code = if s.passed() { 0 } else { 1 };
    Ok(Done { doc: to_value(&s), text: render::campaign(&s), code })
}

fn cyclotomic_check(a: &CyclotomicArgs) -> Result<Done, String> {
    check_odd_prime("p", a.p)?;
    if a.n == 0 || a.m == 0 || a.trials == 0 {
        return Err("n, m and trials must be positive".into());
    }
    let cfg = CheckConfig { p: a.p, n: a.n, m: a.m, trials: a.trials, seed: a.seed };
    let r = run_check(&cfg).map_err(|e| e.to_string())?;
    let code = if !r.passed {
        1
    } else if a.out.strict && r.checks.iter().any(|c| c.skipped.is_some()) {
        2
    } else {
        0
    };
    Ok(Done { doc: to_value(&r), text: render::cyclotomic(&r), code })
}

fn run(cmd: &Command) -> (Output, Result<Done, String>) {
    match cmd {
        Command::Analyze(a) => (a.out, analyze(a)),
        Command::Delta(a) => (a.out, delta(a)),
        Command::CurveLocal(a) => (a.out, curve_local(a)),
        Command::ToySelmer(a) => (a.out, toy_selmer(a)),
        Command::CyclotomicCheck(a) => (a.out, cyclotomic_check(a)),
    }
}

fn emit_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values print"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (out, result) = run(&cli.command);
    match result {
        Ok(done) => {
            if out.json {
                emit_json(&done.doc);
            } else {
                print!("{}", done.text);
            }
            ExitCode::from(done.code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            if out.json {
                emit_json(&json!({ "error": msg }));
            }
            ExitCode::from(1)
        }
    }
}
