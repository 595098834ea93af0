use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn config(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs", &format!("{name}.cfg")]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chevfiber"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn roots_report_order_and_degrees() {
    let out = run(&["roots", "--type", "G2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["order"], 12);
    assert_eq!(v["degrees"], serde_json::json!([2, 6]));
    assert!(stderr(&out).contains("PASS"));

    let out = run(&["roots", "--type", "B", "--rank", "3", "--format", "json"]);
    assert_eq!(json(&out)["order"], 48);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["roots", "--type", "Z9"]).status.code(), Some(1));
    assert_eq!(run(&["roots", "--type", "B"]).status.code(), Some(1));
    assert_eq!(run(&["roots", "--type", "A2", "--rank", "3"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let toy = config("toy");
    assert_eq!(run(&["fiber", "--config", &toy, "--target", "5"]).status.code(), Some(1));
    assert_eq!(run(&["fiber", "--config", &toy, "--zeta", "1", "--target", "x"]).status.code(), Some(1));
    assert_eq!(run(&["restrict"]).status.code(), Some(1));
    assert_eq!(run(&["restrict", "--config", "/nonexistent.cfg"]).status.code(), Some(1));
}

#[test]
fn invariants_verdict() {
    let out = run(&["invariants", "--type", "B2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("PASS"));
}

#[test]
fn restrict_reports_the_dichotomy() {
    let out = run(&["restrict", "--config", &config("synthetic"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank_d"], 2);
    assert_eq!(v["surjectivity"]["surjective"], false);
    assert_eq!(v["surjectivity"]["failing_degree"], 2);

    let v = json(&run(&["restrict", "--config", &config("toy"), "--format", "json"]));
    assert_eq!(v["rank_d"], 1);
    assert_eq!(v["dim_E"], 1);
    assert_eq!(v["surjectivity"]["surjective"], true);
}

#[test]
fn dependent_selection_exits_two() {
    let out = run(&["restrict", "--config", &config("dependent")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("0/1"));
}

#[test]
fn fiber_json_and_verdict() {
    let out = run(&["fiber", "--config", &config("toy"), "--zeta", "1", "--target", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    let re: Vec<f64> = sols.iter().map(|s| s[0][0].as_f64().unwrap()).collect();
    assert!((re[0] + 2.0).abs() < 1e-12 && (re[1] - 2.0).abs() < 1e-12);
    assert!(stderr(&out).contains("PASS (2 vs 2)"));
}

#[test]
fn csv_has_one_row_per_coordinate() {
    let out = run(&["fiber", "--config", &config("split_b2"), "--target", "1:0.5,-2:1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 8 * 2);
}

#[test]
fn lambda_contains_lambda() {
    let out = run(&["lambda", "--config", &config("synthetic"), "--zeta", "0", "--lambda", "0.7:0.2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let hit = v["solutions"].as_array().unwrap().iter().any(|s| {
        (s[0][0].as_f64().unwrap() - 0.7).abs() < 1e-10 && (s[0][1].as_f64().unwrap() - 0.2).abs() < 1e-10
    });
    assert!(hit);
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("chevfiber-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a2.json");
    let args = ["fiber", "--config", &config("split_a2"), "--target", "1:0.3,2:-1", "--format", "json", "--seed", "9"];
    let stdout = run(&args).stdout;
    let mut with_out = args.to_vec();
    let p = path.to_string_lossy().into_owned();
    with_out.extend(["--out", &p]);
    let out = run(&with_out);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classify_filters() {
    let out = run(&["classify", "--filter", "b_exceptional", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"], 10);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["b_exceptional"] == true));
    let v = json(&run(&["classify", "--filter", "split,b_exceptional", "--format", "json"]));
    assert_eq!(v["count"], 0);
    assert_eq!(run(&["classify", "--filter", "nonsense"]).status.code(), Some(1));
}

#[test]
fn truncated_database_exits_two() {
    let dir = std::env::temp_dir().join(format!("chevfiber-db-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pairs.db");
    let text: String = chevfiber::pairdb::EMBEDDED
        .lines()
        .filter(|l| !l.starts_with("e8(-24)xe8(-24)"))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&path, text).unwrap();
    let out = run(&["classify", "--config", &path.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("FAIL"));
    std::fs::remove_dir_all(&dir).unwrap();
}
