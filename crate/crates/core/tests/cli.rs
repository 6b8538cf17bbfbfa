mod common;

use std::path::PathBuf;

use common::corpus_dir;
use geores::cli::json::{render, resolution_from_json, resolution_json};
use geores::cli::system::Format;
use geores::cli::{parse_system, run};
use geores::solver::{solve, SolverConfig};
use geores::Error;
use serde_json::Value;

/// Runs the CLI; returns (exit code, stdout, stderr).
fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut all = vec!["geores"];
    all.extend_from_slice(args);
    let code = run(all, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("geores-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn corpus_file(name: &str) -> String {
    corpus_dir().join(name).to_string_lossy().into_owned()
}

#[test]
fn sparse_systems_parse() {
    let s = parse_system("# comment\nfield 101\nvars x y\neq x^2 - y\neq x*y + 3\n").unwrap();
    assert_eq!(s.format, Format::Sparse);
    assert_eq!((s.p(), s.n(), s.s(), s.d()), (101, 2, 2, Some(2)));
    assert_eq!(s.vars, ["x", "y"]);
}

#[test]
fn programs_parse() {
    let s = parse_system("field 101\ninputs x\ng = mul x x\nout g\n").unwrap();
    assert_eq!(s.format, Format::Slp);
    assert_eq!(s.cost().size, 1);
    // division-free programs get syntactic degree bounds
    assert_eq!(s.d(), Some(2));
    let q = parse_system("field 101\ninputs x\ng = add x 1\nh = div x g\nout h\n").unwrap();
    assert_eq!(q.d(), None);
}

#[test]
fn field_must_be_prime() {
    assert!(matches!(parse_system("field 24\nvars x\neq x\n"), Err(Error::NotPrime(24))));
}

#[test]
fn syntax_errors_report_the_line() {
    match parse_system("field 101\nvars x y\neq x^2 + z\n") {
        Err(Error::Syntax { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn exit_codes() {
    let good = corpus_file("diag23.sys");
    assert_eq!(cli(&["solve", &good]).0, 0);
    let bad_field = scratch("bad_field.sys", "field 24\nvars x\neq x\n");
    assert_eq!(cli(&["solve", bad_field.to_str().unwrap()]).0, 2);
    let not_radical = scratch("not_radical.sys", "field 101\nvars x y\neq x^2\neq y\n");
    let (code, _, err) = cli(&["solve", not_radical.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("not radical"));
    let tiny = scratch("tiny.sys", "field 5\nvars x y\neq x^2 - y\neq y^2 - 2\n");
    assert_eq!(cli(&["solve", tiny.to_str().unwrap()]).0, 4);
    assert_eq!(cli(&["solve", "/nonexistent/system.sys"]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
}

#[test]
fn solve_output_lists_the_points() {
    let (code, out, _) = cli(&["solve", &corpus_file("diag23.sys"), "--eliminate", "1,2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["degree_ledger"], serde_json::json!([2, 4]));
    assert_eq!(v["rational_points"].as_array().unwrap().len(), 4);
    assert!(v["eliminating"]["poly"].is_array());
}

#[test]
fn resolution_json_round_trip() {
    let s = parse_system(&std::fs::read_to_string(corpus_dir().join("mixed3_10007.sys")).unwrap()).unwrap();
    let sol = solve(&s.circuit, &SolverConfig::default()).unwrap();
    let v = resolution_json(&sol.resolution);
    let back = resolution_from_json(&v).unwrap();
    assert_eq!(render(&resolution_json(&back)), render(&v));
    assert!(back.validate(&s.circuit).ok());
}

#[test]
fn verify_accepts_a_stored_resolution() {
    let sys = corpus_file("circle23.sys");
    let (code, out, _) = cli(&["solve", &sys]);
    assert_eq!(code, 0);
    let stored = scratch("circle.json", &out);
    let (code, out, _) = cli(&["verify", &sys, stored.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["ok"], Value::Bool(true));
    let other = scratch("other.sys", "field 23\nvars x y\neq x - 1\neq y - 2\n");
    let (code, _, err) = cli(&["verify", other.to_str().unwrap(), stored.to_str().unwrap()]);
    assert_eq!(code, 5);
    assert!(err.contains("failed"));
}

#[test]
fn avoid_mode_argument_forms() {
    let own = scratch("own.sys", "field 101\nvars x y\neq x^2 + y^2 - 2\neq x - y\navoid x - 1\n");
    let plain = scratch("plain.sys", "field 101\nvars x y\neq x^2 + y^2 - 2\neq x - y\n");
    let g = scratch("g.sys", "field 101\nvars x y\neq x - 1\n");
    let degree = |args: &[&str]| {
        let (code, out, err) = cli(args);
        assert_eq!(code, 0, "{err}");
        serde_json::from_str::<Value>(&out).unwrap()["degree"].clone()
    };
    let (own, plain, g) = (own.to_str().unwrap(), plain.to_str().unwrap(), g.to_str().unwrap());
    assert_eq!(degree(&["solve", plain]), 2);
    assert_eq!(degree(&["solve", own, "--mode", "avoid"]), 1);
    assert_eq!(degree(&["solve", "--mode", "avoid", own]), 1);
    assert_eq!(degree(&["solve", plain, "--mode", "avoid", g]), 1);
    assert_eq!(cli(&["solve", plain, "--mode", "avoid"]).0, 2);
}

#[test]
fn oracle_subcommand() {
    let (code, out, _) = cli(&["oracle", &corpus_file("diag23.sys")]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
}

#[test]
fn bench_reports_bounds() {
    let (code, out, _) = cli(&["bench", &corpus_file("cubic2_10007.sys")]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let stages = v["stages"].as_array().unwrap();
    let h = stages.iter().find(|s| s["stage"] == "homogenize").unwrap();
    assert!(h["size"].as_u64().unwrap() <= h["size_bound"].as_u64().unwrap());
    assert_eq!(v["solve"]["ok"], Value::Bool(true));
}

#[test]
fn same_seed_same_bytes() {
    let sys = corpus_file("quad3_101.sys");
    let a = cli(&["solve", &sys, "--seed", "17"]).1;
    let b = cli(&["solve", &sys, "--seed", "17"]).1;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
