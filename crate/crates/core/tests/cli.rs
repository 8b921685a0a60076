use std::io::Write;

use serde_json::Value;
use sl2lab::cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};

fn sl2lab(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("sl2lab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn gens_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn gap_bound_json_has_schema_and_lubotzky_values() {
    let (code, out, _) = sl2lab(&["gap-bound", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "sl2lab.bound-report/1");
    assert_eq!(v["generators"], 4);
    let lo: f64 = v["gamma_raw"]["lo"].as_str().unwrap().parse().unwrap();
    assert!((lo - 0.700547).abs() < 1e-6);
}

#[test]
fn gap_bound_reads_generator_files() {
    let f = gens_file("[[1,3],[0,1]]\n[[1,0],[3,1]]\n");
    let path = f.path().to_str().unwrap();
    let (code, _, err) = sl2lab(&["gap-bound", "--gens", path]);
    assert_eq!(code, EXIT_DOMAIN, "{err}");
    let (code, closed, _) = sl2lab(&["gap-bound", "--gens", path, "--close"]);
    assert_eq!(code, EXIT_OK);
    let (_, builtin, _) = sl2lab(&["gap-bound"]);
    assert_eq!(closed, builtin);
}

#[test]
fn malformed_and_missing_files_are_usage_errors() {
    let f = gens_file("[[1,3],[0\n");
    let (code, _, _) = sl2lab(&["gap-bound", "--gens", f.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = sl2lab(&["gap-bound", "--gens", "/nonexistent/gens.txt"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = sl2lab(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn domain_errors_exit_three() {
    // Lubotzky generators reduce to non-generating matrices mod 3.
    assert_eq!(sl2lab(&["diameter", "--p", "3"]).0, EXIT_DOMAIN);
    assert_eq!(sl2lab(&["spectrum", "--p", "15"]).0, EXIT_DOMAIN);
}

#[test]
fn verify_requires_a_seed_when_sampling() {
    let (code, _, err) = sl2lab(&["verify", "growth", "--p", "7", "--samples", "5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--seed"));
    let (code, out, _) = sl2lab(&["verify", "pink", "--p", "5", "--exhaustive"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().last().unwrap().contains("\"summary\""));
}

#[test]
fn verify_emits_one_record_per_line() {
    let (code, out, _) = sl2lab(&["verify", "growth", "--p", "7", "--samples", "20", "--seed", "4"]);
    assert!(code == EXIT_OK || code == EXIT_VIOLATION);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["instances"], 20);
    assert_eq!(summary["violations"], 0);
    for rec in &lines[..lines.len() - 1] {
        assert_eq!(rec["suite"], "growth");
        assert_eq!(rec["seed"], 4);
        assert!(matches!(rec["verdict"].as_str(), Some("ok" | "violation" | "inconclusive")));
    }
}

#[test]
fn walk_csv_counts_sum_to_all_words() {
    let (code, out, _) = sl2lab(&["walk", "--p", "5", "--steps", "3"]);
    assert_eq!(code, EXIT_OK);
    let total: u128 = out
        .lines()
        .filter_map(|l| l.rsplit(',').next()?.parse::<u128>().ok())
        .sum();
    assert_eq!(total, 64);
}

#[test]
fn diameter_and_spectrum_reports() {
    let (code, out, _) = sl2lab(&["diameter", "--p", "13", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["order"].as_u64(), v["diameter"].as_u64(), v["girth"].as_u64()), (Some(2184), Some(9), Some(10)));
    let (code, out, _) = sl2lab(&["spectrum", "--p", "11", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "sl2lab.spectrum/1");
    assert!((v["lambda1"].as_f64().unwrap() - 0.111795694020).abs() < 1e-9);
}
