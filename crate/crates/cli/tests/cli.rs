use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use choix::{natural_extension, Assessment, Method, OptionSet, ToleranceConfig};
use serde_json::Value;
use tempfile::TempDir;

const RUNNING: &str = r#"{ "dimension": 2, "pairs": [
    { "chosen": [[5, -3], [3, -2]], "rejected": [[1, -1], [-2, 1]] },
    { "chosen": [[-4, 8]], "rejected": [[3, 1]] } ] }"#;
const INCONSISTENT: &str = r#"{ "dimension": 2, "pairs": [ { "chosen": [[0, 0]], "rejected": [[1, 1]] } ] }"#;
const A3: &str = r#"{ "options": [[-3, 4], [0, 1], [4, -3]] }"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn choix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_choix")).args(args).env_remove("CHOIX_LP_TOL").output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_reports_consistency_through_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", RUNNING);
    let bad = write(&dir, "bad.json", INCONSISTENT);
    for method in ["naive", "conj", "full"] {
        let out = choix(&["check", "--assessment", p(&good), "--method", method]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"consistent":true}"#);
        let out = choix(&["check", "--assessment", p(&bad), "--method", method]);
        assert_eq!(out.status.code(), Some(1));
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"consistent":false}"#);
    }
}

#[test]
fn choose_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", RUNNING);
    let q = write(&dir, "q.json", A3);
    let out = choix(&["choose", "--assessment", p(&a), "--options", p(&q)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["chosen"], serde_json::json!([[-3.0, 4.0]]));
    assert_eq!(v["consistent"], Value::Bool(true));

    let assessment: Assessment = serde_json::from_str(RUNNING).unwrap();
    let query: OptionSet = serde_json::from_str("[[-3, 4], [0, 1], [4, -3]]").unwrap();
    for (flag, method) in [("naive", Method::Naive), ("conj", Method::Conjunctive), ("full", Method::Full)] {
        let lib = natural_extension(&query, &assessment, method, &ToleranceConfig::default()).unwrap();
        let expected = serde_json::to_string(&serde_json::to_value(&lib).unwrap()).unwrap();
        let out = choix(&["choose", "--assessment", p(&a), "--options", p(&q), "--method", flag]);
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), expected);
    }
    // keys come out sorted
    let text = String::from_utf8(out.stdout).unwrap();
    let (c, s, r) = (text.find("\"chosen\"").unwrap(), text.find("\"consistent\"").unwrap(), text.find("\"rejected\"").unwrap());
    assert!(c < s && s < r);
}

#[test]
fn bare_option_arrays_are_accepted() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", RUNNING);
    let q = write(&dir, "q.json", "[[-2, 2], [5, -4]]");
    let out = choix(&["choose", "--assessment", p(&a), "--options", p(&q)]);
    assert_eq!(stdout_json(&out)["chosen"], serde_json::json!([[-2.0, 2.0], [5.0, -4.0]]));
}

#[test]
fn simplify_prints_generators_and_sizes() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", RUNNING);
    let out = choix(&["simplify", "--assessment", p(&a)]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["conjunctive"], serde_json::json!([[[4.0, -2.0]], [[7.0, -4.0]], [[-7.0, 7.0]]]));
    assert_eq!(v["disjunctive"].as_array().unwrap().len(), 1);
    assert_eq!(v["sizes"]["h_naive"], 3);
    assert_eq!(v["sizes"]["g_naive"], "4");
    assert_eq!(v["sizes"]["g_conj"], "1");
    assert_eq!(v["sizes"]["g_full"], 1);
    assert_eq!(v["inconsistent"], false);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", RUNNING);
    let malformed = write(&dir, "m.json", "{ not json");
    let wrong_dim = write(&dir, "w.json", r#"{ "options": [[1, 2, 3]] }"#);
    let empty_v = write(&dir, "e.json", r#"{ "dimension": 2, "pairs": [ { "chosen": [], "rejected": [[1, 1]] } ] }"#);
    for args in [
        vec!["check", "--assessment", p(&malformed)],
        vec!["choose", "--assessment", p(&a), "--options", p(&wrong_dim)],
        vec!["check", "--assessment", p(&empty_v)],
        vec!["check", "--assessment", "/nonexistent/file.json"],
        vec!["check", "--assessment", p(&a), "--method", "fast"],
    ] {
        let out = choix(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn lp_tolerance_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", RUNNING);
    let out = Command::new(env!("CARGO_BIN_EXE_choix"))
        .args(["check", "--assessment", p(&a)])
        .env("CHOIX_LP_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_choix"))
        .args(["check", "--assessment", p(&a)])
        .env("CHOIX_LP_TOL", "1e-7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn experiments_write_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{ "seed": 3, "dim": 4, "L": 3, "reps": 2, "set_size": [2, 8], "model": "max", "extremes_per_lowerexp": 4 }"#);
    for (kind, header) in [
        ("size", "l,g_naive,g_conj,g_full"),
        ("epsilon", "epsilon,h_naive,h_simpl,g_naive,g_conj,g_full"),
        ("timing", "l,t_build_naive,t_build_conj,t_build_full,t_choose_naive,t_choose_conj,t_choose_full,breakeven_n"),
    ] {
        let out_path = dir.path().join(format!("{kind}.csv"));
        let out = choix(&["experiment", kind, "--config", p(&cfg), "--out", p(&out_path)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let text = std::fs::read_to_string(&out_path).unwrap();
        assert_eq!(text.lines().next().unwrap(), header);
    }
    let first = std::fs::read_to_string(dir.path().join("size.csv")).unwrap();
    choix(&["experiment", "size", "--config", p(&cfg), "--out", p(&dir.path().join("again.csv"))]);
    assert_eq!(first, std::fs::read_to_string(dir.path().join("again.csv")).unwrap());

    let bad = write(&dir, "bad.json", r#"{ "seed": 3, "L": 3, "reps": 0 }"#);
    let out = choix(&["experiment", "size", "--config", p(&bad), "--out", p(&dir.path().join("x.csv"))]);
    assert_eq!(out.status.code(), Some(2));
}
