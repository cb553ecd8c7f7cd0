use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn dparity(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_dparity")).args(args).output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().expect("exit code"),
    )
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn check_golden(name: &str, args: &[&str], code: i32) {
    let (stdout, stderr, got) = dparity(args);
    assert_eq!(got, code, "{name}: stderr {stderr}");
    assert_eq!(stdout, golden(name), "{name} drifted from its golden file");
}

const ANALYZE_37: &[&str] =
    &["analyze", "--curve", "0,0,1,-1,0", "--d", "-7", "--p", "5", "--n", "1", "--mode", "maximal-dihedral"];

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn golden_analyze() {
    check_golden("analyze_37a1_d-7_p5.json", &with(ANALYZE_37, &["--json"]), 0);
    check_golden("analyze_37a1_d-7_p5.txt", ANALYZE_37, 0);
    check_golden(
        "analyze_37a1_explicit_exact.json",
        &[
            "analyze", "--curve", "0,0,1,-1,0", "--d", "-7", "--p", "5", "--mode", "explicit", "--behavior",
            "5:ramified", "--behavior", "37:split", "--sel-cofree-rank-one", "--json",
        ],
        0,
    );
    check_golden(
        "analyze_11a1_d-1_p11_split_mult.txt",
        &["analyze", "--curve", "0,-1,1,-10,-20", "--d", "-1", "--p", "11", "--sel-zero"],
        0,
    );
}

#[test]
fn golden_local_and_delta() {
    check_golden("curve_local_11a1.txt", &["curve-local", "--curve", "0,-1,1,-10,-20", "--max-prime", "30", "--p", "5"], 0);
    check_golden("curve_local_37a1.json", &["curve-local", "--curve", "0,0,1,-1,0", "--max-prime", "13", "--json"], 0);
    check_golden(
        "delta_37a1_ell5.json",
        &["delta", "--curve", "0,0,1,-1,0", "--d", "-7", "--p", "5", "--ell", "5", "--json"],
        0,
    );
    check_golden(
        "delta_rejected.json",
        &[
            "delta", "--curve", "0,0,1,-1,0", "--d", "-7", "--p", "5", "--ell", "7", "--mode", "explicit",
            "--behavior", "7:ramified", "--json",
        ],
        1,
    );
}

#[test]
fn golden_campaigns() {
    check_golden("toy_selmer_p5_seed11.json", &["toy-selmer", "--p", "5", "--trials", "200", "--seed", "11", "--json"], 0);
    check_golden(
        "cyclotomic_check_3_1_3.json",
        &["cyclotomic-check", "--p", "3", "--n", "1", "--m", "3", "--trials", "20", "--seed", "1", "--json"],
        0,
    );
}

#[test]
fn end_to_end_bound() {
    let (out, _, code) = dparity(&with(ANALYZE_37, &["--json"]));
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["base_parity"]["value"], "odd");
    assert_eq!(v["base_parity"]["source"], "computed");
    let bounds: Vec<&Value> = v["conclusions"].as_array().unwrap().iter().map(|c| &c["bound"]["value"]).collect();
    assert!(bounds.contains(&&Value::from(5)), "{bounds:?}");
    for place in v["places"].as_array().unwrap() {
        for key in ["ell", "splitting", "behavior", "delta", "rule", "cite"] {
            assert!(place.get(key).is_some(), "place lacks {key}");
        }
    }
    for key in ["curve", "field", "p", "n", "mode", "base_parity", "places", "sum_mod_2", "conclusions"] {
        assert!(v.get(key).is_some(), "report lacks {key}");
    }
}

#[test]
fn json_round_trips_byte_identical() {
    let runs: [Vec<&str>; 4] = [
        with(ANALYZE_37, &["--json"]),
        vec!["curve-local", "--curve", "1,0,1,4,-6", "--max-prime", "40", "--json"],
        vec!["toy-selmer", "--p", "3", "--trials", "50", "--seed", "3", "--json"],
        vec!["cyclotomic-check", "--p", "5", "--trials", "10", "--json"],
    ];
    for args in runs {
        let (out, _, _) = dparity(&args);
        let v: Value = serde_json::from_str(&out).expect("exactly one JSON document");
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(again, out, "{args:?}");
    }
}

#[test]
fn same_seed_same_bytes() {
    let args = ["toy-selmer", "--p", "7", "--trials", "300", "--seed", "42", "--json"];
    assert_eq!(dparity(&args).0, dparity(&args).0);
    let other = ["toy-selmer", "--p", "7", "--trials", "300", "--seed", "43", "--json"];
    assert_ne!(dparity(&args).0, dparity(&other).0);
}

#[test]
fn toy_selmer_campaign_passes() {
    let (out, _, code) = dparity(&["toy-selmer", "--p", "3", "--trials", "10000", "--seed", "7", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["duality_failures"], 0);
    assert_eq!(v["howard_failures"], 0);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn validation_errors_exit_one() {
    let (out, err, code) = dparity(&["analyze", "--curve", "0,0,1,-1,0", "--d", "12", "--p", "5"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("d must be squarefree"), "{err}");

    for (args, needle) in [
        (vec!["analyze", "--curve", "0,0,0,0,0", "--d", "-7", "--p", "5"], "singular"),
        (vec!["analyze", "--curve", "0,0,1,-1,0", "--d", "-7", "--p", "4"], "odd prime"),
        (vec!["analyze", "--curve", "0,0,1,-1,0", "--d", "-7", "--p", "2"], "odd prime"),
        (vec!["analyze", "--curve", "0,0,1,-1,0", "--d", "-7", "--p", "9"], "odd prime"),
        (vec!["analyze", "--curve", "0,0,1,-1", "--d", "-7", "--p", "5"], "five"),
        (vec!["analyze", "--curve", "0,0,1,-1,0", "--d", "1", "--p", "5"], "0 or 1"),
        (vec!["toy-selmer", "--p", "6"], "odd prime"),
        (vec!["cyclotomic-check", "--p", "3", "--m", "0"], "positive"),
        (vec!["analyze", "--curve", "0,0,1,-1,0", "--d", "-7", "--p", "5", "--behavior", "11:sideways"], "ramified, split"),
    ] {
        let (_, err, code) = dparity(&args);
        assert_eq!(code, 1, "{args:?}");
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}

#[test]
fn unknown_flags_rejected() {
    let (_, err, code) = dparity(&["analyze", "--curve", "0,0,1,-1,0", "--d", "-7", "--p", "5", "--frobnicate"]);
    assert_eq!(code, 1);
    assert!(err.contains("--frobnicate"), "{err}");
}

#[test]
fn json_errors_are_one_document() {
    let (out, _, code) = dparity(&["analyze", "--curve", "0,0,1,-1,0", "--d", "12", "--p", "5", "--json"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"], "d must be squarefree (got 12)");
}

#[test]
fn strict_exits_two_on_unknown() {
    // y² = x³ + 1 has additive reduction at 3, which is inert in Q(i).
    let base = ["analyze", "--curve", "0,0,0,0,1", "--d", "-1", "--p", "3"];
    assert_eq!(dparity(&base).2, 0);
    assert_eq!(dparity(&with(&base, &["--strict"])).2, 2);
    assert_eq!(dparity(&with(ANALYZE_37, &["--strict"])).2, 0);
    let delta = ["delta", "--curve", "0,0,0,0,1", "--d", "-1", "--p", "3", "--ell", "3", "--strict"];
    assert_eq!(dparity(&delta).2, 2);
}

#[test]
fn even_base_parity_drops_lower_bound() {
    let (out, _, _) = dparity(&["analyze", "--curve", "0,0,1,-1,0", "--d", "-2", "--p", "5", "--json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["base_parity"]["value"], "even");
    let held: Vec<&str> = v["conclusions"].as_array().unwrap().iter().map(|c| c["theorem"].as_str().unwrap()).collect();
    assert_eq!(held, vec!["parity_transfer"]);
}
