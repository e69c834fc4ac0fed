//! End-to-end tests against the compiled `etf` binary: exit codes, file
//! round-trips, and report formats.

use std::path::PathBuf;
use std::process::{Command, Output};

fn etf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmpfile(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("etf-cli-test-{}-{name}", std::process::id()));
    path
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn construct_singer_writes_frame_and_verifies() {
    let path = tmpfile("singer2.cmx");
    let out = etf(&[
        "construct",
        "--kind",
        "singer",
        "--q",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        exit_code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = String::from_utf8_lossy(&out.stderr);
    assert!(summary.contains("d=3 n=7"), "summary line: {summary}");
    assert!(summary.contains("alpha=0.47140452"));

    let verify = etf(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(exit_code(&verify), 0);
    let text = String::from_utf8_lossy(&verify.stdout);
    assert!(text.contains("PASSED"));
    assert!(text.contains("0.4714045208"));

    let certify = etf(&["certify-gap", "--in", path.to_str().unwrap()]);
    assert_eq!(exit_code(&certify), 0);
    let text = String::from_utf8_lossy(&certify.stdout);
    assert!(text.contains("rank K = 4"));
    assert!(text.contains("rank R = 4"));
    assert!(text.contains("lambda 3/4"));
    assert!(text.contains("(attained)"));
    assert!(text.trim_end().ends_with("PASSED"));

    std::fs::remove_file(&path).ok();
}

#[test]
fn construct_simplex_to_stdout() {
    let out = etf(&["construct", "--kind", "simplex", "--d", "2"]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("cmx-1 2 3"));
    assert_eq!(stdout.lines().count(), 1 + 6);
}

#[test]
fn construct_rejects_non_prime_power() {
    let out = etf(&["construct", "--kind", "singer", "--q", "6"]);
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a prime power"));
}

#[test]
fn construct_usage_error_without_q() {
    let out = etf(&["construct", "--kind", "singer"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = etf(&["verify", "--nonsense"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn harmonic_inline_and_ds_file_agree() {
    let inline = etf(&[
        "construct",
        "--kind",
        "harmonic",
        "--v",
        "7",
        "--elements",
        "0,1,3",
    ]);
    assert_eq!(exit_code(&inline), 0);

    let ds_path = tmpfile("fano.json");
    std::fs::write(&ds_path, r#"{"v": 7, "elements": [0, 1, 3]}"#).unwrap();
    let from_file = etf(&[
        "construct",
        "--kind",
        "harmonic",
        "--ds-file",
        ds_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&from_file), 0);
    assert_eq!(inline.stdout, from_file.stdout, "same frame bytes");
    std::fs::remove_file(&ds_path).ok();
}

#[test]
fn harmonic_rejects_non_difference_set() {
    let out = etf(&[
        "construct",
        "--kind",
        "harmonic",
        "--v",
        "7",
        "--elements",
        "0,1,2",
    ]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn verify_flags_scaled_column() {
    let path = tmpfile("scaled.cmx");
    let out = etf(&[
        "construct",
        "--kind",
        "simplex",
        "--d",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    // Double the first entry line (first column of a 2x3 frame spans
    // lines 2 and 5 in row-major order).
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    for idx in [1usize, 4] {
        let mut parts = lines[idx].split_whitespace();
        let re: f64 = parts.next().unwrap().parse().unwrap();
        let im: f64 = parts.next().unwrap().parse().unwrap();
        lines[idx] = format!("{:.16e} {:.16e}", 2.0 * re, 2.0 * im);
    }
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();

    let verify = etf(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(exit_code(&verify), 1);
    let out_text = String::from_utf8_lossy(&verify.stdout);
    assert!(out_text.contains("FAIL"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn truncated_file_is_exit_2() {
    let path = tmpfile("truncated.cmx");
    std::fs::write(&path, "cmx-1 3 7\n1.0 0.0\n").unwrap();
    let out = etf(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    std::fs::remove_file(&path).ok();

    let missing = etf(&["verify", "--in", "/nonexistent/frame.cmx"]);
    assert_eq!(exit_code(&missing), 2);
}

#[test]
fn certify_simplex_passes_out_of_window() {
    let path = tmpfile("simplex2.cmx");
    let out = etf(&[
        "construct",
        "--kind",
        "simplex",
        "--d",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let certify = etf(&["certify-gap", "--in", path.to_str().unwrap()]);
    assert_eq!(exit_code(&certify), 0);
    let text = String::from_utf8_lossy(&certify.stdout);
    assert!(text.contains("not asserted outside the window"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn certify_random_matrix_fails_at_verification() {
    let path = tmpfile("random.cmx");
    let mut body = String::from("cmx-1 3 7\n");
    for i in 0..21 {
        body.push_str(&format!(
            "{:.16e} {:.16e}\n",
            0.1 * (i % 5) as f64,
            0.07 * (i % 3) as f64
        ));
    }
    std::fs::write(&path, body).unwrap();
    let certify = etf(&["certify-gap", "--in", path.to_str().unwrap()]);
    assert_eq!(exit_code(&certify), 1);
    assert!(String::from_utf8_lossy(&certify.stderr).contains("verification"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn certify_json_reports_are_byte_identical() {
    let path = tmpfile("singer3.cmx");
    etf(&[
        "construct",
        "--kind",
        "singer",
        "--q",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    let run = || {
        let out = etf(&[
            "certify-gap",
            "--in",
            path.to_str().unwrap(),
            "--format",
            "json",
        ]);
        assert_eq!(exit_code(&out), 0);
        out.stdout
    };
    let first = run();
    let second = run();
    assert_eq!(first, second);
    let parsed: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(parsed["ranks"]["rank_k"], 9);
    assert_eq!(parsed["ranks"]["nullity_k"], 3);
    assert_eq!(parsed["provenance"]["rel_tol"], 1e-9);
    assert!(parsed["provenance"]["input_sha256"].as_str().unwrap().len() == 64);
    std::fs::remove_file(&path).ok();
}

#[test]
fn admissible_single_pairs() {
    let excluded = etf(&["admissible", "--d", "3", "--n", "8"]);
    assert_eq!(exit_code(&excluded), 1);
    let text = String::from_utf8_lossy(&excluded.stdout);
    assert!(text.contains("excluded: singer-zauner-gap, szollosi-(3,8)"));

    let witnessed = etf(&["admissible", "--d", "6", "--n", "31"]);
    assert_eq!(exit_code(&witnessed), 0);
    let text = String::from_utf8_lossy(&witnessed.stdout);
    assert!(text.contains("not-excluded"));
    assert!(text.contains("witness singer(5)"));

    let bad = etf(&["admissible", "--d", "5"]);
    assert_eq!(exit_code(&bad), 2);
}

#[test]
fn admissible_scan_csv() {
    let out = etf(&[
        "admissible",
        "--dmax",
        "8",
        "--nmax",
        "64",
        "--format",
        "csv",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "d,n,gerzon,naimark-gerzon,singer-zauner-gap,szollosi-(3,8),overall,witness"
    );
    let rows: Vec<&str> = lines.collect();
    let expected: usize = (1..=8).map(|d| 64 - d + 1).sum();
    assert_eq!(rows.len(), expected);
    assert!(rows.contains(&"3,8,pass,pass,violated,violated,excluded,"));
    assert!(rows.contains(&"6,31,pass,pass,pass,pass,not-excluded,singer(5)"));
}
