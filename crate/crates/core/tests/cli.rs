use std::process::Command;

use dirichlet_h2::zeta::zeta;
use serde_json::Value;

fn h2norm(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_h2norm")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = h2norm(args);
    assert!(err.is_empty(), "{err}");
    (code, serde_json::from_str(&out).unwrap())
}

fn entry<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["result"]["report"]["entries"].as_array().unwrap().iter().find(|e| e["name"] == name).unwrap()
}

#[test]
fn bounds_for_three_halves_plus_two_s() {
    let (code, v) = json(&["bounds", "--c", "1.5", "--coeffs", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "bounds");
    assert_eq!(v["args"]["c"], "1.5");
    assert!(v["artifact_version"].is_string());
    let gl = entry(&v, "genlower")["value"].as_f64().unwrap();
    let mpq = entry(&v, "mpq_upper")["value"].as_f64().unwrap();
    assert!((gl - zeta(3.0).unwrap()).abs() < 1e-13);
    assert!((mpq - zeta(2.0).unwrap()).abs() < 1e-13);
    assert_eq!(entry(&v, "newupper")["applicable"], false);
    assert_eq!(v["result"]["consistent"], true);
}

#[test]
fn reports_are_deterministic() {
    let a = h2norm(&["measure", "--fixture", "fig1-c", "--delta", "0.5", "--samples", "20000", "--seed", "4"]);
    let b = h2norm(&["measure", "--fixture", "fig1-c", "--delta", "0.5", "--samples", "20000", "--seed", "4"]);
    assert_eq!(a, b);
    let c = h2norm(&["measure", "--fixture", "fig1-c", "--delta", "0.5", "--samples", "20000", "--seed", "5"]);
    assert_ne!(a.1, c.1);
}

#[test]
fn floats_carry_at_most_fifteen_significant_digits() {
    let (_, out, _) = h2norm(&["bounds", "--c", "2", "--coeffs", "0.5,0.5"]);
    for tok in out.split(|c: char| !(c.is_ascii_digit() || c == '.' || c == 'e' || c == '-')) {
        if tok.contains('.') {
            let mantissa = tok.split('e').next().unwrap();
            let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
            assert!(digits.trim_start_matches('0').len() <= 15, "{tok}");
        }
    }
}

#[test]
fn verify_dkzeta_suite() {
    let (code, v) = json(&["verify-lemmas", "--suite", "dkzeta"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["ok"], true);
    assert!(!v["result"]["suites"][0]["statement"].as_str().unwrap().is_empty());
}

#[test]
fn curve_csv_inner_radius() {
    let (code, out, _) = h2norm(&["curve", "--coeffs", "0.75,0.25", "--T", "200", "--steps", "400000", "--csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("t,re,im"));
    let min = lines
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[1] - 1.5).hypot(f[2])
        })
        .fold(f64::INFINITY, f64::min);
    assert!((min - 0.5).abs() < 1e-2, "{min}");
}

#[test]
fn fixtures_through_the_cli() {
    let (_, v) = json(&["curve", "--fixture", "fig1-b"]);
    assert_eq!(v["result"]["annulus"], serde_json::json!([0.0, 1.0]));
    let (code, v) = json(&["bounds", "--fixture", "phi-alpha-1"]);
    assert_eq!(code, 0);
    assert!((v["result"]["certified_norm_sq"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let (_, v) = json(&["measure", "--fixture", "example-7.1", "--delta", "0.7905694150420949", "--samples", "1000000"]);
    let c = v["result"]["shapiro_constant"]["estimate"].as_f64().unwrap();
    assert!((c - (13.0 - 4.0 * 10f64.sqrt()) / 18.0).abs() < 2e-3);
    let (_, v) = json(&["bounds", "--fixture", "list"]);
    assert!(v["result"].as_array().unwrap().len() >= 10);
}

#[test]
fn other_commands_run() {
    let (code, v) = json(&["majorize", "--b", "0.5,0.5", "--coeffs", "0.75,0.25", "--k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["b_majorized_by_c"], true);
    assert!(v["result"]["rows"].as_array().unwrap().iter().all(|r| r["ok"] == true));
    let (_, v) = json(&["majorize", "--b", "0.75,0.25", "--coeffs", "0.5,0.5"]);
    assert_eq!(v["result"]["b_majorized_by_c"], false);
    let (code, v) = json(&["subordinate", "--coeffs", "0.6,0.4", "--b", "0.5,0.5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["ordering_holds"], true);
    let (code, v) = json(&["subordinate", "--scan", "--samples", "20", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["pairs"], 20);
    assert_eq!(v["seed"], 3);
    let (code, v) = json(&["opnorm", "--c", "1.5", "--coeffs", "1", "--scan", "--nin", "32", "--kout", "20"]);
    assert_eq!(code, 0);
    let levels = v["result"]["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    let m: Vec<f64> = levels.iter().map(|l| l["matrix_lower"].as_f64().unwrap()).collect();
    assert!(m.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{m:?}");
    let (code, v) = json(&["inner-check", "--samples", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["inside_disc"], true);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("h2norm-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.csv");
    let (code, out, _) = h2norm(&["curve", "--coeffs", "1", "--steps", "10", "--csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("t,re,im\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(h2norm(&["bounds", "--nonsense"]).0, 1);
    assert_eq!(h2norm(&["frobnicate"]).0, 1);
    assert_eq!(h2norm(&["bounds", "--c", "0.7", "--coeffs", "1"]).0, 1);
    assert_eq!(h2norm(&["verify-lemmas", "--suite", "nope"]).0, 1);
    assert_eq!(h2norm(&["measure", "--coeffs", "1", "--delta", "2"]).0, 1);
    assert_eq!(h2norm(&["--version"]).0, 0);
}
