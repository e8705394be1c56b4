//! End-to-end tests of the binary: subcommand payloads, exit codes, exact
//! serialization, and byte-stability of repeated runs.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_persist-ma1"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "exit {:?} for {args:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn pn_factorial_law() {
    let text = stdout(&["pn", "--a", "3", "--theta", "1", "--n", "4"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["entries"][4]["exact"], "1/120");
    assert_eq!(v["method"], "trivial");
    assert_eq!(v["a"], "3");
}

#[test]
fn classify_zero_tail() {
    let text = stdout(&["classify", "--a", "-1/2", "--theta", "3"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["canonical"], "ZeroTail");
    assert_eq!(v["dual_target"], serde_json::Value::Null);
}

#[test]
fn classify_duality_target() {
    let text = stdout(&["classify", "--a", "2", "--theta", "3"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["canonical"], "DualPositive");
    assert_eq!(v["dual_target"]["a"], "1/2");
    assert_eq!(v["dual_target"]["theta"], "1/3");
}

#[test]
fn verify_orange_point_is_clean() {
    let out = run(&["verify", "--a", "-1/4", "--theta", "1/2", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(v["ok"], true);
    for row in v["per_n"].as_array().unwrap() {
        assert_eq!(row["max_discrepancy"], "0");
    }
}

#[test]
fn verify_crosses_many_paths() {
    let text = stdout(&["verify", "--a", "1/2", "--theta", "-1/2", "--n", "5"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let paths: Vec<&str> = v["paths"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_str().unwrap())
        .collect();
    for expected in [
        "blue_gf",
        "blue_recurrence",
        "blue_combinatorial",
        "yellow_gf",
        "dual_neg",
        "oracle",
    ] {
        assert!(paths.contains(&expected), "missing {expected} in {paths:?}");
    }
    assert_eq!(v["ok"], true);
}

#[test]
fn invalid_a_is_a_one_line_json_error() {
    let out = run(&["pn", "--a", "-2", "--theta", "1/2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["error"].as_str().unwrap().contains("a > -1"));
}

#[test]
fn unparsable_rational_is_rejected() {
    let out = run(&["pn", "--a", "1e-3", "--theta", "1/2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decimal_input_is_exact() {
    let via_decimal = stdout(&["pn", "--a", "0.25", "--theta", "-0.5", "--n", "4"]);
    let via_fraction = stdout(&["pn", "--a", "1/4", "--theta", "-1/2", "--n", "4"]);
    assert_eq!(via_decimal, via_fraction);
    let v: serde_json::Value = serde_json::from_str(&via_decimal).unwrap();
    assert_eq!(v["a"], "1/4");
    assert_eq!(v["entries"][1]["exact"], "91/100");
}

#[test]
fn output_is_byte_stable() {
    for args in [
        vec!["pn", "--a", "1/2", "--theta", "-1/2", "--n", "6"],
        vec!["exponent", "--a", "0", "--theta", "1/2"],
        vec![
            "pn", "--a", "1", "--theta", "1/2", "--n", "3", "--mode", "mc", "--samples",
            "50000", "--seed", "42",
        ],
        vec!["verify", "--a", "2", "--theta", "-1/2", "--n", "5"],
    ] {
        let first = stdout(&args);
        let second = stdout(&args);
        assert_eq!(first, second, "unstable output for {args:?}");
    }
}

#[test]
fn pn_modes_agree() {
    let formula = stdout(&["pn", "--a", "1/2", "--theta", "1/2", "--n", "6"]);
    for mode in ["recurrence", "combinatorial", "oracle"] {
        let other = stdout(&["pn", "--a", "1/2", "--theta", "1/2", "--n", "6", "--mode", mode]);
        let a: serde_json::Value = serde_json::from_str(&formula).unwrap();
        let b: serde_json::Value = serde_json::from_str(&other).unwrap();
        assert_eq!(a["entries"], b["entries"], "mode {mode}");
    }
}

#[test]
fn recurrence_mode_outside_blue_is_domain_error() {
    let out = run(&[
        "pn", "--a", "-1/4", "--theta", "1/2", "--n", "3", "--mode", "recurrence",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_cap_respects_environment() {
    let out = run(&["pn", "--a", "1", "--theta", "1", "--n", "11", "--mode", "oracle"]);
    assert_eq!(out.status.code(), Some(2));
    let raised = bin()
        .args(["pn", "--a", "1", "--theta", "1", "--n", "11", "--mode", "oracle"])
        .env("PERSIST_MA1_CAP", "12")
        .output()
        .unwrap();
    assert_eq!(raised.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8(raised.stdout).unwrap()).unwrap();
    assert_eq!(v["entries"][11]["exact"], "1/479001600");
}

#[test]
fn exponent_payload_shape() {
    let text = stdout(&["exponent", "--a", "2", "--theta", "0"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["kind"], "RootOfE");
    assert_eq!(v["z0"]["mid"], 3.0);
    assert!(v["constant"].is_number());
    let nf = stdout(&["exponent", "--a", "-1/3", "--theta", "1/5"]);
    let v: serde_json::Value = serde_json::from_str(&nf).unwrap();
    assert_eq!(v["kind"], "TrivialOne");
}

#[test]
fn phi_and_mallows_render_polynomials() {
    let text = stdout(&["phi", "--ell", "3"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["poly"], "-1 + theta - 1/6*theta^3");
    let text = stdout(&["phi", "--ell", "3", "--theta", "1/2"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["value"], "-25/48");
    let text = stdout(&["mallows", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["poly"], "2 + theta");
}

#[test]
fn scan_writes_sorted_csv() {
    let dir = std::env::temp_dir().join(format!("persist-ma1-scan-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.csv");
    let args = [
        "scan",
        "--a-min",
        "-1/2",
        "--a-max",
        "1",
        "--theta-min",
        "-1",
        "--theta-max",
        "2",
        "--steps",
        "4",
        "--n",
        "2",
        "--out",
        path.to_str().unwrap(),
    ];
    let text = stdout(&args);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rows"], 16);
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "a,theta,region,p1,p2,lambda");
    assert_eq!(csv.lines().count(), 17);
    // repeated run produces identical bytes
    stdout(&args);
    let csv2 = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv, csv2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn pretty_mode_prints_a_table() {
    let text = stdout(&["pn", "--a", "3", "--theta", "1", "--n", "2", "--pretty"]);
    assert!(text.contains("exact"));
    assert!(text.contains("1/6"));
    assert!(!text.trim_start().starts_with('{'));
}
