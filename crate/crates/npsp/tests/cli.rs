use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn npsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_npsp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    let out = npsp(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), v)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn domain_stats_counts() {
    let (code, v) = json(&["domain-stats"]);
    assert_eq!(code, 0);
    assert_eq!(v["tool"], "npsp");
    assert_eq!(v["command"], "domain-stats");
    assert_eq!(v["result"]["total"], 216);
    assert_eq!(v["result"]["np"], 102);
    let (code, v) = json(&["domain-stats", "--n", "4", "--stretch"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["np"], 906);
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        &["verify-basis", "--output", "json"][..],
        &["spath", "--output", "json"][..],
        &["demo", "--rule", "majority-superset", "--output", "json"][..],
    ] {
        let a = npsp(args);
        let b = npsp(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_basis_finds_three_dictators() {
    let (code, v) = json(&["verify-basis"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["result"]["solutions"], 3);
    assert_eq!(v["result"]["dictators"], serde_json::json!([1, 2, 3]));
}

#[test]
fn larger_specs_need_stretch() {
    let out = npsp(&["verify-basis", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--stretch"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(npsp(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(npsp(&["verify-basis", "--cap", "0"]).status.code(), Some(2));
    assert_eq!(npsp(&["check-rule"]).status.code(), Some(2));
    assert_eq!(npsp(&["check-rule", "--rule-file", "/nonexistent/rule.txt"]).status.code(), Some(2));
    assert_eq!(npsp(&["spath", "--from", "abc bca cab"]).status.code(), Some(2));
}

#[test]
fn saved_rules_round_trip_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d2.txt");
    let (code, _) = json(&["demo", "--rule", "dictator:2", "--rule-file", path_str(&file)]);
    assert_eq!(code, 0);
    let (code, v) = json(&["check-rule", "--rule-file", path_str(&file)]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["strategy_proof"], true);
    let (code, v) = json(&["find-dictator", "--rule-file", path_str(&file)]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dictator"], 2);
}

#[test]
fn manipulable_rule_exits_one_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d1.txt");
    assert_eq!(json(&["demo", "--rule", "dictator:1", "--rule-file", path_str(&file)]).0, 0);
    // flip the outcome at one profile where #1's top is not chosen by anyone else
    let text = std::fs::read_to_string(&file).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let target = lines
        .iter()
        .position(|l| l.starts_with("abc ") && l.ends_with("-> a"))
        .unwrap();
    lines[target] = lines[target].replace("-> a", "-> c");
    std::fs::write(&file, lines.join("\n") + "\n").unwrap();
    let (code, v) = json(&["check-rule", "--rule-file", path_str(&file)]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    assert!(v["result"]["witness"].is_object());
}

#[test]
fn malformed_rule_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    std::fs::write(&file, "3 3 abc\nabc bca cab -> q\n").unwrap();
    let out = npsp(&["check-rule", "--rule-file", path_str(&file)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn export_cnf_writes_formula_and_map() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("basis.cnf");
    let (code, _) = json(&["export-cnf", "--cnf-out", path_str(&file)]);
    assert_eq!(code, 0);
    let cnf = std::fs::read_to_string(&file).unwrap();
    assert!(cnf.starts_with("p cnf 306 "));
    let map = std::fs::read_to_string(dir.path().join("basis.cnf.map")).unwrap();
    assert_eq!(map.lines().count(), 306);
}

#[test]
fn spath_between_two_profiles() {
    let (code, v) = json(&[
        "spath",
        "--m",
        "4",
        "--stretch",
        "--from",
        "dabc bdca cadb",
        "--to",
        "abdc bcda cdab",
        "--s",
        "abc",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["valid"], true);
    let steps = v["result"]["steps"].as_array().unwrap();
    assert_eq!(steps.first().unwrap(), "dabc bdca cadb");
    assert_eq!(steps.last().unwrap(), "abdc bcda cdab");
}

#[test]
fn lift_merge_and_sweep_pass() {
    assert_eq!(json(&["verify-lift", "--stretch"]).0, 0);
    assert_eq!(json(&["verify-merge", "--m", "4", "--stretch"]).0, 0);
    let (code, v) = json(&["decisive-sweep"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["queries"], v["result"]["unsat"]);
}
