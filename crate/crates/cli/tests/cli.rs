use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p2cover")).args(args).output().expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

#[test]
fn analyze_non_extendible_example() {
    let out = run(&["analyze", "--p", "3", "--d", "3", "--f", "(1+pi^12*(1+Z^2))*(1+Z^2+pi^3*Z)^3"]);
    assert!(out.status.success());
    let r = &records(&out)[0];
    assert_eq!(r["type"], serde_json::json!([0, 4, 1, 5]));
    assert_eq!(r["effective_model"], "E(5,1,0,1)");
    assert_eq!(r["strongly_extendible"], false);
    assert_eq!(r["context"], serde_json::json!({"p": 3, "d": 3, "D": 16, "N": 72}));
}

#[test]
fn hom_order_matches_min_formula() {
    // r = min { r : 3^r * 3 >= 0 } = 0, so the order is 3^(1-0).
    let out = run(&["hom", "--p", "3", "--d", "1", "--from", "G(3,1)", "--to", "G(0,1)"]);
    assert!(out.status.success());
    assert_eq!(records(&out)[0]["order"], 3);
    let out = run(&["hom", "--from", "G(0,1)", "--to", "G(2,1)"]);
    assert_eq!(records(&out)[0]["order"], 1);
}

#[test]
fn enumerate_torsor_filter() {
    let all = records(&run(&["enumerate", "--p", "3", "--d", "1"]));
    let sub = records(&run(&["enumerate", "--p", "3", "--d", "1", "--filter", "torsor"]));
    let want: Vec<Value> = all
        .iter()
        .filter(|r| r["type"][3] == r["type"][1] && r["type"][1].as_u64().unwrap() < 3)
        .cloned()
        .collect();
    assert_eq!(sub, want);
    assert!(all.iter().any(|r| r["type"] == serde_json::json!([1, 3, 1, 3])));
}

#[test]
fn realize_round_trips() {
    let out = run(&["realize", "--type", "1,3,2,3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &records(&out)[0];
    assert_eq!(r["analysis"]["type"], serde_json::json!([1, 3, 2, 3]));
    assert_eq!(r["equations"].as_array().unwrap().len(), 4);
}

#[test]
fn hopf_check_mu_p2() {
    let out = run(&["hopf-check", "--d", "3", "--model", "G(0,2)"]);
    assert!(out.status.success());
    let r = &records(&out)[0];
    for k in ["coassociative", "counit", "antipode", "closure"] {
        assert_eq!(r[k], true, "{k}");
    }
    assert_eq!(r["rank"], 9);
    assert_eq!(r["special_fiber"], "MuType");
}

#[test]
fn model_map_between_extensions() {
    let r = &records(&run(&["hom", "--d", "3", "--from", "E(5,1,0,1)", "--to", "E(4,1,0,1)"]))[0];
    assert_eq!((r["exists"].clone(), r["isomorphism"].clone()), (Value::Bool(true), Value::Bool(false)));
    let r = &records(&run(&["hom", "--d", "3", "--from", "E(7,2,0,1)", "--to", "E(7,2,pi,1)"]))[0];
    assert_eq!(r["exists"], false);
}

#[test]
fn exit_codes() {
    let bad_syntax = run(&["analyze", "--f", "1 + * Z"]);
    assert_eq!(bad_syntax.status.code(), Some(2));
    let r = &records(&bad_syntax)[0];
    assert_eq!(r["error"], "invalid_input");
    assert!(r["message"].as_str().unwrap().contains("position 4"));

    let not_integral = run(&["analyze", "--f", "1+pi^3*Z"]);
    assert_eq!(not_integral.status.code(), Some(3));

    let bad_prime = run(&["enumerate", "--p", "4"]);
    assert_eq!(bad_prime.status.code(), Some(2));

    let overflow = run(&["analyze", "--f", "1+Z^16"]);
    assert_eq!(overflow.status.code(), Some(2));
    // Divisible by pi but not by pi^9.
    let valuation = run(&["analyze", "--f", "pi*(1+Z^2)"]);
    assert_eq!(valuation.status.code(), Some(3));
}

#[test]
fn strict_mode_agrees() {
    let out = run(&["analyze", "--strict", "--f", "1+pi^9*(1+Z^2)"]);
    assert!(out.status.success());
    let r = &records(&out)[0];
    assert_eq!(r["type"], serde_json::json!([1, 3, 1, 3]));
    assert_eq!(r["strict"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["atlas", "--p", "3", "--d", "1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let recs = records(&a);
    let no: Vec<_> = recs.iter().filter(|r| r["realizable"] == "no").map(|r| r["type"].clone()).collect();
    assert_eq!(no, vec![serde_json::json!([0, 2, 3, 3])]);
}

#[test]
fn text_format() {
    let out = run(&["--format", "text", "analyze-zp", "--f", "1+pi^3*(1+Z^2)"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "level 1, model G(1,1), different 4");
}
