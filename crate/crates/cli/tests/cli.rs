use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn linfcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linfcert"))
        .args(args)
        .env_remove("LINFCERT_VERTEX_BUDGET")
        .env_remove("LINFCERT_LP_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn all_pass(report: &Value) -> bool {
    report["assertions"].as_array().unwrap().iter().all(|a| a["pass"] == true)
}

#[test]
fn iso_on_z2_radius_four() {
    let out = linfcert(&["iso", "--in", "z2.grp", "--oracle", "abelian", "-R", "4", "--cocycle", "area"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["kind"], "iso");
    assert_eq!(r["value"], "1/1");
    assert_eq!(r["radius"], 4);
    assert_eq!(r["oracle"], "abelian");
    assert_eq!(r["presentation_sha"].as_str().unwrap().len(), 64);
    assert_eq!(r["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(all_pass(&r));
}

#[test]
fn malformed_presentation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.grp");
    fs::write(&bad, "gens: a b\nrel: abXB\n").unwrap();
    let out = linfcert(&["validate", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("2:8"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn witness_numbers() {
    let out = linfcert(&["witness", "-n", "1", "-k", "3", "--base", "z.grp"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let got: Vec<&str> = r["assertions"].as_array().unwrap().iter().map(|a| a["got"].as_str().unwrap()).collect();
    assert_eq!(got, ["9/1", "12/1", "3/4"]);
    assert!(all_pass(&r));
}

#[test]
fn unknown_subcommand_and_missing_input() {
    assert_eq!(linfcert(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(linfcert(&["ball", "--in", "no-such-group", "-R", "1"]).status.code(), Some(2));
    assert_eq!(linfcert(&["ball", "--in", "z2", "-R", "1", "--oracle", "magic"]).status.code(), Some(2));
    assert_eq!(linfcert(&[]).status.code(), Some(2));
    assert_eq!(linfcert(&["--help"]).status.code(), Some(0));
}

#[test]
fn budgets_exit_three() {
    let out = Command::new(env!("CARGO_BIN_EXE_linfcert"))
        .args(["ball", "--in", "z2", "-R", "4"])
        .env("LINFCERT_VERTEX_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = linfcert(&["iso", "--in", "z2", "-R", "4", "--lp-budget", "100"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reports_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<String> = (0..2).map(|i| dir.path().join(format!("r{i}.json")).to_str().unwrap().to_string()).collect();
    for p in &paths {
        let out = linfcert(&["sample", "--in", "z2", "-R", "2", "--samples", "4", "--seed", "11", "--out", p]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (a, b) = (fs::read(&paths[0]).unwrap(), fs::read(&paths[1]).unwrap());
    assert_eq!(a, b);
    let r: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(r["details"]["seed"], 11);
    assert_eq!(r["details"]["lambdas"].as_array().unwrap().len(), 4);
}

#[test]
fn finite_group_commands() {
    let r = json(&linfcert(&["johnson", "--in", "z5", "-R", "5"]));
    assert_eq!(r["value"], "2/1");
    assert!(all_pass(&r));
    let out = linfcert(&["mean", "--in", "z5", "--action", "2 3 4 5 1", "--trials", "20", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(all_pass(&json(&out)));
    let out = linfcert(&["mean", "--in", "z", "--action", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cusped_commands() {
    let out = linfcert(&["cusped", "--in", "z2_rel", "-R", "2", "-D", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["details"]["cosets"], 5);
    assert!(all_pass(&r));
    let r = json(&linfcert(&["horoprobe", "--in", "z2_rel", "-R", "2", "-D", "2"]));
    assert_eq!(r["value"], "1/3");
    assert!(all_pass(&r));
    let out = linfcert(&["sample", "--in", "z2_rel", "-R", "2", "-D", "1", "--samples", "2", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["details"]["relative"], true);
}

#[test]
fn ball_fill_folner_and_lp_dump() {
    let r = json(&linfcert(&["ball", "--in", "z2", "-R", "2", "--cells"]));
    assert_eq!(r["details"]["cell_counts"], serde_json::json!([13, 16, 4]));
    assert_eq!(r["details"]["complex"]["faces"].as_array().unwrap().len(), 4);

    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("fill.lp");
    let out = linfcert(&["fill", "--in", "z2", "-R", "2", "--word", "abAB", "--dump-lp", lp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "1/1");
    let text = fs::read_to_string(&lp).unwrap();
    assert!(text.contains("Minimize") && text.contains("End"), "{text}");

    let out = linfcert(&["fill", "--in", "z2", "-R", "2", "--word", "ab"]);
    assert_eq!(out.status.code(), Some(2));

    let r = json(&linfcert(&["folner", "--in", "z2", "-R", "4"]));
    assert_eq!(r["value"], "1/1");
    assert!(all_pass(&r));
}

#[test]
fn text_format_mirrors_json() {
    let out = linfcert(&["validate", "--in", "genus2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("validate (schema 1"));
    assert!(text.contains("oracle: dehn"));
    assert!(text.contains("[PASS] oracle applies"));
}
