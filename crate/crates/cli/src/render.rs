//! Plain-text renderings. JSON output goes through serde instead.

use std::fmt::Write;

use serde::Serialize;

use dihedral_parity::cyclotomic::CheckReport;
use dihedral_parity::parity_engine::{Conclusion, DeltaRecord, ParityReport};
use dihedral_parity::selmer_lab::CampaignSummary;

fn coeffs(a: &[i128; 5]) -> String {
    let s: Vec<String> = a.iter().map(i128::to_string).collect();
    format!("[{}]", s.join(","))
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

const PLACE_HEADER: [&str; 7] = ["ell", "splitting", "behavior", "reduction", "delta", "rule", "note"];

fn place_row(r: &DeltaRecord) -> [String; 7] {
    let note = if let Some(d) = r.norm_index_dim {
        format!("norm index dim {d}")
    } else if let Some(d) = r.torsion_dim {
        format!("torsion dim {d}")
    } else {
        r.failed.join("; ")
    };
    [
        r.ell.to_string(),
        r.splitting.to_string(),
        r.behavior.to_string(),
        r.reduction.to_string(),
        r.delta.to_string(),
        opt(r.rule),
        note,
    ]
}

fn table<const N: usize>(out: &mut String, header: [&str; N], rows: &[[String; N]]) {
    let mut width = header.map(str::len);
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    out.push_str(&line(header.to_vec()));
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
}

fn conclusion(out: &mut String, c: &Conclusion) {
    let id = serde_plain(&c.theorem);
    match &c.statement {
        Some(s) => writeln!(out, "  {id}: {s}").unwrap(),
        None => writeln!(out, "  {id}: failed {}", c.failed().join("; ")).unwrap(),
    }
}

// Unit enum variants serialize to their snake_case name.
fn serde_plain<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

pub fn report(r: &ParityReport) -> String {
    let mut out = String::new();
    let c = &r.curve;
    writeln!(out, "curve {}  minimal {}  conductor {}", coeffs(&c.coefficients), coeffs(&c.minimal), c.conductor).unwrap();
    writeln!(out, "field Q(sqrt({}))  discriminant {}", r.field.d, r.field.discriminant).unwrap();
    writeln!(out, "extension p={} n={} [F:K]={} mode {}", r.p, r.n, r.degree, r.mode).unwrap();
    let b = &r.base_parity;
    write!(out, "base parity {} ({}; chi(-N) = {})", b.value, serde_plain(&b.source), b.chi_minus_n).unwrap();
    if !b.failed.is_empty() {
        write!(out, "  computed path needs: {}", b.failed.join("; ")).unwrap();
    }
    out.push('\n');
    if let Some(note) = &b.note {
        writeln!(out, "  note: {note}").unwrap();
    }
    out.push_str("places\n");
    let rows: Vec<[String; 7]> = r.places.iter().map(place_row).collect();
    table(&mut out, PLACE_HEADER, &rows);
    writeln!(out, "sum of delta mod 2: {}", r.sum_mod_2).unwrap();
    if let Some(s) = r.s_p {
        writeln!(out, "|S_p| = {s}").unwrap();
    }
    out.push_str("conclusions\n");
    if r.conclusions.is_empty() {
        out.push_str("  none\n");
    }
    for c in &r.conclusions {
        conclusion(&mut out, c);
    }
    if !r.withheld.is_empty() {
        out.push_str("withheld\n");
        for c in &r.withheld {
            conclusion(&mut out, c);
        }
    }
    out
}

pub fn delta(r: &DeltaRecord) -> String {
    let mut out = String::new();
    table(&mut out, PLACE_HEADER, &[place_row(r)]);
    if let Some(c) = &r.cite {
        writeln!(out, "  {c}").unwrap();
    }
    out
}

#[derive(Serialize)]
pub struct LocalRow {
    pub prime: u64,
    pub reduction: String,
    pub kodaira: String,
    pub conductor_exponent: u32,
    pub a_ell: i64,
    pub count: Option<u64>,
    pub anomalous: bool,
    pub supersingular: bool,
    pub p_torsion_dim: Option<u32>,
}

pub fn curve_local(header: &str, rows: &[LocalRow]) -> String {
    let mut out = format!("{header}\n");
    let cells: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.prime.to_string(),
                r.reduction.clone(),
                r.kodaira.clone(),
                r.a_ell.to_string(),
                opt(r.count),
                if r.anomalous { "yes" } else { "no" }.into(),
                if r.supersingular { "yes" } else { "no" }.into(),
                opt(r.p_torsion_dim),
            ]
        })
        .collect();
    table(&mut out, ["prime", "type", "kodaira", "a_ell", "#E(F_ell)", "anomalous", "supersingular", "dim E[p]"], &cells);
    out
}

pub fn campaign(s: &CampaignSummary) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "toy-selmer p={} trials={} seed={}: {} duality failures, {} pairing failures",
        s.p, s.trials, s.seed, s.duality_failures, s.howard_failures
    )
    .unwrap();
    let hist: Vec<String> =
        s.index_histogram.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, c)| format!("{i}:{c}")).collect();
    writeln!(out, "index histogram {}", hist.join(" ")).unwrap();
    for f in &s.failures {
        let inst = f.system.as_ref().map_or_else(|| "null".to_string(), |x| serde_json::to_string(x).unwrap());
        writeln!(out, "FAIL trial={} trial_seed={} reason={} instance={inst}", f.trial, f.trial_seed, f.reason).unwrap();
    }
    out
}

pub fn cyclotomic(r: &CheckReport) -> String {
    let c = &r.config;
    let mut out = format!("cyclotomic-check p={} n={} m={} trials={} seed={}\n", c.p, c.n, c.m, c.trials, c.seed);
    for k in &r.checks {
        let status = if k.skipped.is_some() {
            "skip"
        } else if k.passed() {
            "ok"
        } else {
            "FAIL"
        };
        write!(out, "  {status:<4}  {:<30} trials={} failures={}", k.name, k.trials, k.failures).unwrap();
        if let Some(d) = k.skipped.as_ref().or(k.detail.as_ref()) {
            write!(out, "  {d}").unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "{}", if r.passed { "all checks passed" } else { "some checks FAILED" }).unwrap();
    out
}
