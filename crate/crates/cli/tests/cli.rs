// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

fn cvneg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvneg")).args(args).output().expect("cvneg runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|line| line.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

#[test]
fn en_point_ideal_state() {
    let out = cvneg(&["en-point", "--r", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let e_n: f64 = field(&text, "e_n").parse().unwrap();
    assert!((e_n - 1.0 / std::f64::consts::LN_2).abs() < 1e-12);
    assert_eq!(field(&text, "entangled"), "true");
}

#[test]
fn en_point_vacuum_and_past_threshold() {
    let text = stdout(&cvneg(&["en-point", "--r", "0"]));
    assert_eq!(field(&text, "e_n").parse::<f64>().unwrap(), 0.0);
    assert_eq!(field(&text, "entangled"), "false");

    let text = stdout(&cvneg(&["en-point", "--r", "0.5", "--kappa", "0.2", "--g", "0.05", "--t", "3"]));
    assert_eq!(field(&text, "e_n").parse::<f64>().unwrap(), 0.0);
    assert_eq!(field(&text, "entangled"), "false");
}

#[test]
fn en_point_json() {
    let out = cvneg(&["en-point", "--r", "0.5", "--kappa1", "0.1", "--t", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["channel"]["kappa1"], 0.1);
    assert_eq!(v["channel"]["kappa2"], 0.0);
    assert_eq!(v["entangled"], true);
}

#[test]
fn invalid_arguments_exit_2_and_name_the_field() {
    for (args, name) in [
        (vec!["en-point", "--r", "0.5", "--kappa1", "-1"], "kappa1"),
        (vec!["en-point", "--r", "-0.5"], "r"),
        (vec!["en-point", "--r", "0.5", "--t", "-2"], "t"),
        (vec!["sweep", "--var", "t", "--start", "0", "--stop", "1", "--count", "1"], "count"),
        (vec!["sweep", "--var", "T", "--start", "0", "--stop", "2", "--count", "3"], "T"),
        (vec!["threshold", "--r", "0.5", "--kappa", "0.2", "--g", "0"], "g"),
        (vec!["wigner-grid", "--r", "0.5", "--points", "1"], "points"),
    ] {
        let out = cvneg(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains(name), "{args:?}: {}", stderr(&out));
    }
    assert_eq!(cvneg(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(cvneg(&["en-point"]).status.code(), Some(2));
}

#[test]
fn threshold_prints_closed_form_and_bisection() {
    let text = stdout(&cvneg(&["threshold", "--r", "0.5", "--kappa", "0.2", "--g", "0.05", "--bisect"]));
    let t_c: f64 = field(&text, "t_c").parse().unwrap();
    assert!((t_c - 2.2229867789505935).abs() < 1e-13);
    let diff: f64 = field(&text, "abs_diff").parse().unwrap();
    assert!(diff < 1e-8);
}

#[test]
fn sweep_csv_schema_and_endpoints() {
    let out = cvneg(&["sweep", "--var", "T", "--start", "0", "--stop", "1", "--count", "5", "--r", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "r,T,e_n,trace_norm,entangled");
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), 0.0);
    assert!((rows[4][2].parse::<f64>().unwrap() - 1.0 / std::f64::consts::LN_2).abs() < 1e-12);
    // 17 significant digits
    assert_eq!(rows[1][1], "2.5000000000000000e-1");
}

#[test]
fn sweep_json_mirrors_csv() {
    let base = ["sweep", "--var", "t", "--start", "0", "--stop", "4", "--count", "9", "--r", "0.5", "--kappa", "0.2", "--g", "0.05"];
    let csv = stdout(&cvneg(&base));
    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let json = stdout(&cvneg(&json_args));
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    for (csv_line, json_line) in csv.lines().skip(1).zip(json.lines()) {
        let v: serde_json::Value = serde_json::from_str(json_line).unwrap();
        assert_eq!(v.as_object().unwrap().len(), header.len());
        for (key, cell) in header.iter().zip(csv_line.split(',')) {
            // same text in both formats
            assert!(json_line.contains(&format!("\"{key}\":{cell}")), "{key} {cell} {json_line}");
        }
    }
    assert_eq!(json.lines().count(), 9);
}

#[test]
fn sweep_output_is_thread_count_independent() {
    let args = ["sweep", "--var", "r", "--start", "0", "--stop", "2", "--count", "33", "--kappa1", "0.1", "--t", "1"];
    let one = cvneg(&[&["--threads", "1"], &args[..]].concat());
    let four = cvneg(&[&["--threads", "4"], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn sweep_writes_file_and_reports_io_errors() {
    let dir = std::env::temp_dir().join(format!("cvneg-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let args = ["sweep", "--var", "kappa", "--start", "0", "--stop", "0.5", "--count", "3", "--r", "0.5", "--t", "1"];
    let out = cvneg(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().count(), 4);
    std::fs::remove_dir_all(&dir).unwrap();

    let missing = dir.join("missing").join("sweep.csv");
    let out = cvneg(&[&args[..], &["--out", missing.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn wigner_grid_csv() {
    let out = cvneg(&["wigner-grid", "--r", "0.3", "--kappa", "0.1", "--t", "1", "--points", "5", "--half-width", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "q1,p1,q2,p2,w");
    assert_eq!(lines.count(), 25);
}

#[test]
fn verify_single_suite_emits_json_lines() {
    let out = cvneg(&["verify", "--suite", "squeezer", "--cutoff", "20"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let reports: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["name"], "pt_squeezer");
    assert_eq!(reports[0]["pass"], true);
    assert_eq!(reports[0]["cutoff"], 20);
}

#[test]
fn verify_failure_exits_1() {
    // the transpose lemma requires cutoff 12, so the suite reports a failure
    let out = cvneg(&["verify", "--suite", "transpose", "--cutoff", "8"]);
    assert_eq!(out.status.code(), Some(1));
    let first: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(first["pass"], false);
    assert!(first["error"].as_str().unwrap().contains("cutoff"));
}
