use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_outfn-euler"))
        .args(args)
        .env_remove("OUTFN_EULER_PRECISION")
        .output()
        .expect("binary runs")
}

fn run_to(args: &[&str], path: &Path) -> (i32, String) {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--output", path.to_str().unwrap()]);
    let out = run(&full);
    (out.status.code().unwrap(), std::fs::read_to_string(path).unwrap_or_default())
}

fn last_line(s: &str) -> &str {
    s.lines().last().unwrap_or("")
}

#[test]
fn chi_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chi.csv");
    let (code, body) = run_to(&["chi", "--max-n", "5"], &path);
    assert_eq!(code, 0);
    let lines: Vec<&str> = body.lines().collect();
    assert!(lines[0].starts_with("# outfn-euler v"), "{}", lines[0]);
    assert!(lines[0].contains("config: command=chi max_n=5 route=lambert"));
    assert_eq!(lines[1], "n,ch_numerator,ch_denominator,Ch_numerator,Ch_denominator");
    assert!(lines[4].starts_with("3,-161,5760,"));
}

#[test]
fn chi_prints_first_coefficients() {
    let out = run(&["chi", "--max-n", "7"]);
    assert!(out.status.success());
    let summary = String::from_utf8(out.stderr).unwrap();
    assert_eq!(summary.lines().count(), 5);
    assert!(summary.contains("ch_5 = -120257/580608"));
}

#[test]
fn chi_implicit_route() {
    let out = run(&["chi", "--max-n", "1", "--route", "implicit"]);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    assert_eq!(last_line(&body), "1,-1,24,-1,24");
}

#[test]
fn chi_json_keeps_rationals_as_strings() {
    let out = run(&["chi", "--max-n", "2", "--format", "json"]);
    let body = String::from_utf8(out.stdout).unwrap();
    let json: serde_json::Value = serde_json::from_str(body.split_once('\n').unwrap().1).unwrap();
    assert_eq!(json[1]["Ch_numerator"], "-23");
    assert_eq!(json[1]["ch_denominator"], "48");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["chi", "--max-n", "0"][..],
        &["asym", "theorem-b", "--R", "0"],
        &["chi", "--max-n", "51", "--route", "laplace-lie"],
        &["verify", "--suite", "bogus"],
        &["chi", "--max-n", "3", "--unknown-flag"],
        &["graphs", "--rank", "2", "--class-cap", "0"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn caps_exit_two() {
    let out = run(&["graphs", "--rank", "3", "--class-cap", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("resource cap exceeded"));
}

#[test]
fn graphs_listing_sums() {
    for (character, sum) in [("tau", "-1/24"), ("sigma", "-1/12"), ("xi", "-1/24")] {
        let out = run(&["graphs", "--rank", "2", "--character", character]);
        assert!(out.status.success());
        let body = String::from_utf8(out.stdout).unwrap();
        assert_eq!(last_line(&body), format!("sum,{sum}"));
        assert_eq!(body.lines().count(), 6, "{body}");
    }
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    for (suite, depth) in [("hopf", "3"), ("routes", "20")] {
        let (code, body) = run_to(&["verify", "--suite", suite, "--depth", depth], &path);
        assert_eq!(code, 0, "{body}");
        assert!(body.contains("\"status\": \"pass\""));
    }
    let (code, body) = run_to(&["verify", "--suite", "graphs", "--depth", "1"], &path);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(body.split_once('\n').unwrap().1).unwrap();
    let rank2 = json["checks"].as_array().unwrap().iter().find(|c| c["name"] == "rank_2_classes").unwrap();
    assert_eq!(rank2["status"], "pass");
}

#[test]
fn precision_env_var_sets_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_outfn-euler"))
        .args(["chi", "--max-n", "1"])
        .env("OUTFN_EULER_PRECISION", "512")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("precision=512"));
    let bad = Command::new(env!("CARGO_BIN_EXE_outfn-euler"))
        .args(["chi", "--max-n", "1"])
        .env("OUTFN_EULER_PRECISION", "8")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn asym_rows() {
    let out = run(&["asym", "theorem-b", "--R", "3", "--n", "100,200,400"]);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = body.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("3")));
}

#[test]
fn identical_config_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to(&["graphs", "--rank", "3", "--leaves", "1", "--disconnected"], &dir.path().join("a.csv"));
    let b = run_to(&["graphs", "--rank", "3", "--leaves", "1", "--disconnected"], &dir.path().join("b.csv"));
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}
