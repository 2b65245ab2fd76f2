use std::process::Command;

use adlv_cli::{run, EXIT_GUARD, EXIT_OK, EXIT_USAGE};
use adlv_core::geom::GPieceLabel;
use adlv_core::{AffineWeylGroup, CartanType};
use serde_json::Value;

fn ok(args: &[&str]) -> String {
    let mut full = vec!["adlv"];
    full.extend_from_slice(args);
    let out = run(full, false);
    assert_eq!(out.code, EXIT_OK, "stderr: {}", out.stderr);
    out.stdout
}

fn code(args: &[&str]) -> i32 {
    let mut full = vec!["adlv"];
    full.extend_from_slice(args);
    run(full, false).code
}

#[test]
fn worked_example_verdict() {
    let out = ok(&["decide", "--type", "A", "--rank", "3", "--x", "s2 s1 s3 s2", "--y", "s3 s2", "--lambda", "0,628,628"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "adlv.verdict/1");
    assert_eq!(v["status"], "Empty");
    assert_eq!(v["rule"], "Main2Empty");
    assert_eq!(v["evidence"]["pieces"][0], "s3 s2 t[0,-628,-628]");
}

#[test]
fn identity_verdict() {
    let out = ok(&["decide", "--x", "e", "--y", "e", "--lambda", "0,0,0"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "NonEmpty");
    assert_eq!(v["rule"], "IdentityElement");
    assert_eq!(v["root_system"], "A3");
}

#[test]
fn decide_from_product_word() {
    let out = ok(&["decide", "--rank", "2", "--elt", "s1 s2 t[-64,-64]", "--format", "text"]);
    assert!(out.starts_with("status: "));
}

#[test]
fn boundary_a1() {
    let v: Value = serde_json::from_str(&ok(&["boundary", "--type", "A", "--rank", "1"])).unwrap();
    let labels = v["labels"].as_array().unwrap();
    assert_eq!(labels.len(), 1);
    assert_eq!(labels[0]["J"], "{}");
    assert_eq!(labels[0]["w"], "s1");
}

#[test]
fn closure_formats() {
    let v: Value = serde_json::from_str(&ok(&["closure", "--rank", "2"])).unwrap();
    assert_eq!(v["labels"].as_array().unwrap().len(), 13);
    let dot = ok(&["closure", "--rank", "2", "--format", "dot"]);
    assert!(dot.starts_with("digraph closure_A2 {"));
    assert!(dot.trim_end().ends_with('}'));
}

#[test]
fn table_csv_shape() {
    let csv = ok(&["table", "--type", "A", "--rank", "2", "--lambda", "64,64"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[0], "x\\y,e,s1,s2,s1 s2,s2 s1,s1 s2 s1");
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 7));
    let v: Value = serde_json::from_str(&ok(&["table", "--rank", "2", "--lambda", "64,64", "--format", "json"])).unwrap();
    assert_eq!(v["schema"], "adlv.table/1");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["frobnicate"]), EXIT_USAGE);
    assert_eq!(code(&["decide", "--x", "e"]), EXIT_USAGE);
    assert_eq!(code(&["decide", "--rank", "2", "--lambda", "1,2,3"]), EXIT_USAGE);
    assert_eq!(code(&["decide", "--type", "Q", "--lambda", "1,2"]), EXIT_USAGE);
    assert_eq!(code(&["pieces", "--rank", "2", "--elt", "s7"]), EXIT_USAGE);
    assert_eq!(code(&["table", "--rank", "5", "--lambda", "1,1,1,1,1"]), EXIT_GUARD);
    assert_eq!(code(&["closure", "--type", "B", "--rank", "5"]), EXIT_GUARD);
    assert_eq!(code(&["--help"]), EXIT_OK);
}

#[test]
fn guard_lifted_by_flag() {
    let out = run(["adlv", "boundary", "--rank", "5", "--override-guards"], false);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
}

#[test]
fn byte_deterministic() {
    for args in [
        &["pieces", "--elt", "x=s2 s1 s3 s2; y=s3 s2; lambda=0,628,628"][..],
        &["closure", "--rank", "3", "--format", "dot"][..],
        &["table", "--rank", "2", "--lambda", "0,66"][..],
    ] {
        assert_eq!(ok(args), ok(args));
    }
}

#[test]
fn printed_values_parse_back() {
    let g = AffineWeylGroup::from_type(CartanType::A, 3).unwrap();
    let v: Value = serde_json::from_str(&ok(&["pieces", "--elt", "s1 s0 s2 t[1,0,-1] s3"])).unwrap();
    let source = g.parse(v["source"].as_str().unwrap()).unwrap();
    assert_eq!(source, g.parse("s1 s0 s2 t[1,0,-1] s3").unwrap());
    for m in v["members"].as_array().unwrap() {
        let text = m.as_str().unwrap();
        assert_eq!(g.format(&g.parse(text).unwrap()), text);
    }
    let v: Value = serde_json::from_str(&ok(&["boundary", "--rank", "3"])).unwrap();
    for l in v["labels"].as_array().unwrap() {
        let text = format!("({}, {})", l["J"].as_str().unwrap(), l["w"].as_str().unwrap());
        let parsed = GPieceLabel::parse(g.finite(), &text).unwrap();
        assert_eq!(parsed.format(g.finite()), text);
    }
}

#[test]
fn selfcheck_passes() {
    let out = run(["adlv", "selfcheck", "--format", "json"], false);
    assert_eq!(out.code, EXIT_OK);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    for r in v.as_array().unwrap() {
        assert_eq!(r["schema"], "adlv.oracle-report/1");
        assert!(r["mismatches"].as_array().unwrap().is_empty());
    }
}

#[test]
fn binary_honours_guard_env() {
    let bin = env!("CARGO_BIN_EXE_adlv");
    let blocked = Command::new(bin).args(["boundary", "--rank", "5"]).env_remove("ADLV_GUARD_OVERRIDE").output().unwrap();
    assert_eq!(blocked.status.code(), Some(EXIT_GUARD));
    let lifted = Command::new(bin)
        .args(["boundary", "--rank", "5", "--format", "text"])
        .env("ADLV_GUARD_OVERRIDE", "1")
        .output()
        .unwrap();
    assert_eq!(lifted.status.code(), Some(EXIT_OK));
    assert!(!lifted.stdout.is_empty());
}
