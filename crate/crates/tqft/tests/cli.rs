//! End-to-end checks of the command-line binary: output shapes, exit
//! codes, determinism, and the resource-cap escape hatch.

use std::process::{Command, Output};

fn tqft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tqft")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn parse_echoes_expression_and_arity() {
    let out = tqft(&["parse", "--expr", "mult ; comult"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("(mult ; comult)"), "got: {text}");
    assert!(text.contains("in\t2"));
    assert!(text.contains("out\t2"));
}

#[test]
fn eval_identity_over_s3_is_a_3x3_identity() {
    let out = tqft(&["eval", "--expr", "id", "--group", "S3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\t0\t0\n0\t1\t0\n0\t0\t1\n");
}

#[test]
fn quantize_agrees_with_eval_on_the_handle() {
    let eval = tqft(&["eval", "--expr", "comult ; mult", "--group", "Z2"]);
    let quant = tqft(&["quantize", "--expr", "comult ; mult", "--group", "Z2"]);
    assert!(eval.status.success() && quant.status.success());
    assert_eq!(stdout(&eval), stdout(&quant));
}

#[test]
fn invariant_all_backends_report_81_for_genus_two_s3() {
    let out = tqft(&["invariant", "--genus", "2", "--group", "S3", "--backend", "all"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "count\t81\nfrobenius\t81\nspan\t81\n");
}

#[test]
fn parse_error_exits_with_code_one() {
    let out = tqft(&["normalize", "--expr", "mult ;"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr.clone()).unwrap().contains("error"));
}

#[test]
fn unknown_group_exits_with_code_one() {
    let out = tqft(&["eval", "--expr", "id", "--group", "E8"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn resource_cap_exits_with_code_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_tqft"))
        .args(["invariant", "--genus", "2", "--group", "S4"])
        .env("TQFT_ENUM_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["oracle", "--group", "S3", "--max-genus", "2"];
    let a = tqft(&args);
    let b = tqft(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.lines().skip(1).all(|l| l.ends_with("true")), "got: {text}");
}

#[test]
fn json_format_is_well_formed() {
    let out = tqft(&["--format", "json", "parse", "--expr", "unit * counit"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["in"], 1);
    assert_eq!(doc["out"], 1);
}

#[test]
fn validate_accepts_a_written_center_and_rejects_garbage() {
    let dir = std::env::temp_dir();
    let good = dir.join("tqft_cli_test_center_z3.json");
    let alg = tqft::center_of_group_algebra(&tqft::FiniteGroup::by_name("Z3").unwrap());
    std::fs::write(&good, alg.to_json()).unwrap();
    let out = tqft(&["validate", "--algebra", good.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().all(|l| l.ends_with("pass")));

    let bad = dir.join("tqft_cli_test_bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = tqft(&["validate", "--algebra", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn normalize_reports_components_and_genus() {
    // A closed genus-1 surface tensored with a cylinder.
    let out = tqft(&[
        "normalize",
        "--expr",
        "(unit ; comult ; mult ; counit) * id",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("closed\tgenus=1"), "got: {text}");
    assert!(text.contains("genus=0"), "got: {text}");
}
