use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use waring_lab::cli::{run, EXIT_PASS, EXIT_USAGE, EXIT_VIOLATION};

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, String) {
    let path = dir.join(name);
    let mut argv = vec!["waring-lab"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--output", path.to_str().unwrap()]);
    let code = run(argv);
    (code, fs::read_to_string(&path).unwrap_or_default())
}

#[test]
fn carry_json_has_min_slack() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_to(dir.path(), "c.json", &["carry", "--k-max", "1000"]);
    assert_eq!(code, EXIT_PASS);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 1000);
    assert_eq!(v["summary"]["min_slack"]["value"], 0);
    assert_eq!(v["summary"]["min_slack"]["k"], 1);
    assert_eq!(v["summary"]["failures"], 0);
    assert_eq!(v["config"]["subcommand"], "carry");
}

#[test]
fn mr_bound_below_domain_is_usage_error() {
    assert_eq!(
        run([
            "waring-lab",
            "lemmas",
            "--which",
            "mr_bound",
            "--range",
            "2:100"
        ]),
        EXIT_USAGE
    );
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(run(["waring-lab", "carry", "--bits", "16"]), EXIT_USAGE);
    assert_eq!(
        run(["waring-lab", "carry", "--k-min", "9", "--k-max", "3"]),
        EXIT_USAGE
    );
    assert_eq!(run(["waring-lab", "figures", "--which", "8"]), EXIT_USAGE);
    assert_eq!(run(["waring-lab", "nope"]), EXIT_USAGE);
    assert_eq!(run(["waring-lab", "carry", "--k-min", "0"]), EXIT_USAGE);
    assert_eq!(run(["waring-lab", "--help"]), EXIT_PASS);
}

#[test]
fn figure5_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_to(
        dir.path(),
        "f5.csv",
        &[
            "figures", "--which", "5", "--n-max", "20", "--format", "csv",
        ],
    );
    assert_eq!(code, EXIT_PASS);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("figure,series,n,mid,width,exact,segment")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 20);
    assert!(rows[0].starts_with("5,u_n,1,1.70951129135145"));
}

#[test]
fn figures_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "figures", "--which", "all", "--x-max", "4", "--step", "0.05", "--n-max", "8", "--bits",
        "64",
    ];
    let (c1, a) = run_to(dir.path(), "a.json", &args);
    let (c2, b) = run_to(dir.path(), "b.json", &args);
    assert_eq!((c1, c2), (EXIT_PASS, EXIT_PASS));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn lemma_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "lemmas",
        "--which",
        "binomial_q",
        "--samples",
        "200",
        "--seed",
        "3",
        "--bits",
        "64",
    ];
    let (_, a) = run_to(dir.path(), "a.json", &args);
    let (_, b) = run_to(dir.path(), "b.json", &args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["results"][0]["checked"], 200);
}

#[test]
fn inverted_mr_bound_lists_offenders() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_to(
        dir.path(),
        "m.json",
        &[
            "lemmas",
            "--which",
            "mr_bound",
            "--range",
            "3:12",
            "--invert-mr",
        ],
    );
    assert_eq!(code, EXIT_VIOLATION);
    let v: Value = serde_json::from_str(&out).unwrap();
    let failures: Vec<u64> = v["results"][0]["failures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["index"].as_u64().unwrap())
        .collect();
    assert_eq!(failures, (3..=12).collect::<Vec<_>>());
}

#[test]
fn segments_and_transfer() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_to(
        dir.path(),
        "s.json",
        &["segments", "--n-max", "60", "--transfer", "--bits", "64"],
    );
    assert_eq!(code, EXIT_PASS);
    let v: Value = serde_json::from_str(&out).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 60);
    assert_eq!(results.last().unwrap()["check"], "monotonicity_transfer");
    assert_eq!(
        results.last().unwrap()["jump_indices"],
        serde_json::json!([2, 3, 5, 7, 11, 17, 25, 38, 57])
    );
}

#[test]
fn g_table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_to(
        dir.path(),
        "g.csv",
        &["g", "--k-max", "4", "--format", "csv"],
    );
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out, "k,g,g_minus_variant,brute_force,verdict\n1,1,-1,1,pass\n2,4,0,4,pass\n3,9,3,9,pass\n4,19,9,19,pass\n");
}

#[test]
fn binary_reads_bits_from_env() {
    let bin = env!("CARGO_BIN_EXE_waring-lab");
    let out = Command::new(bin)
        .args(["g", "--k-max", "2"])
        .env("WARING_LAB_BITS", "20")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let out = Command::new(bin)
        .args(["g", "--k-max", "2"])
        .env("WARING_LAB_BITS", "40")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["bits"], 40);
}
