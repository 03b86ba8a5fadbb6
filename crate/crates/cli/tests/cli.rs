use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn softnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_softnc")).args(args).output().unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_softnc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("softnc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const COUNTEREXAMPLE: &str = r#"{"arities":[3,3],"codomain":3,"values":[2,0,0,1,1,1,2,0,2]}"#;

#[test]
fn check_reads_stdin() {
    let o = with_stdin(&["check", "-", "--props", "wnc,snc"], COUNTEREXAMPLE);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "property,holds\nwnc,yes\nsnc,no\n");
}

#[test]
fn check_json_carries_witnesses() {
    let path = temp_file("ce.json", COUNTEREXAMPLE);
    let o = softnc(&["check", path.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["wnc"]["holds"], true);
    assert_eq!(v["wnc"]["witness"]["steps"][0]["value"], 1);
    assert_eq!(v["nc"]["witness"], serde_json::Value::Null);
    assert_eq!(v["boolnc"]["holds"], false);
}

#[test]
fn booleanize_emits_admissible_sets() {
    let path = temp_file("ce2.json", COUNTEREXAMPLE);
    let o = softnc(&["booleanize", path.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let comps = v.as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0]["table"]["admissible"].as_array().unwrap().len(), 9);
    assert_eq!(
        (comps[0]["nc"].as_bool(), comps[1]["nc"].as_bool()),
        (Some(true), Some(false))
    );
}

#[test]
fn count_snc_two_variables() {
    let o = softnc(&["count-snc", "--nbvars", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["proportion_2dp"], "0.83");
    let o = softnc(&[
        "count-snc",
        "--arities",
        "3,3",
        "--method",
        "recursive",
        "--format",
        "md",
    ]);
    assert!(stdout(&o).contains("- up_snc: 14517\n"));
}

#[test]
fn count_snc_guard_and_force() {
    let o = softnc(&["count-snc", "--arities", "3,3,3,3,3,3,3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn analyze_bundled_fixtures() {
    let o = softnc(&["analyze"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("snc by arity n=1:7/7 n=2:16/20 n=3:3/6 n=4:1/5 n=5:0/2 n=6:2/5 n=7:0/1 n=8:1/1 n=9:0/1"));
    assert!(err.contains("mismatch: E2F1"));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).lines().count(), 49);
}

#[test]
fn analyze_is_reproducible_across_threads() {
    let a = softnc(&["--threads", "1", "analyze", "--format", "json"]);
    let b = softnc(&["--threads", "3", "analyze", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analyze_single_gene_file() {
    let path = temp_file(
        "drk.mvr",
        "model M\ngene Der arity 3 input\ngene Drk arity 3 {\n  1 <- Der:1\n  2 <- Der:2\n}\n",
    );
    let out = path.with_extension("csv");
    let o = softnc(&["analyze", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out).unwrap();
    assert_eq!(csv.lines().nth(1), Some("Drk,M,1,no,yes,yes,yes,b,yes"));
}

#[test]
fn analyze_input_errors() {
    let path = temp_file("empty.mvr", "model Empty\ngene X arity 2 input\n");
    assert_eq!(softnc(&["analyze", path.to_str().unwrap()]).status.code(), Some(3));
    let o = softnc(&["analyze", "/definitely/missing.mvr"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped"));
    let bad = temp_file("bad.mvr", "model B\ngene X arity 3 { 1 <- Y }\n");
    assert_eq!(softnc(&["analyze", bad.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn overlap_priority_flag() {
    let path = temp_file(
        "overlap.mvr",
        "model O\ngene A arity 2 input\ngene T arity 3 {\n  1 <- A\n  2 <- A\n}\n",
    );
    assert_eq!(softnc(&["analyze", path.to_str().unwrap()]).status.code(), Some(3));
    let o = softnc(&["analyze", path.to_str().unwrap(), "--priority", "highest"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn oracle_sweep_agrees() {
    let o = softnc(&["oracle", "--max-domain", "6", "--samples", "50", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("2x3,729,0\n"));
    assert!(s.contains("random,50,0\n"));
    assert!(!s.contains("3x3") && !s.contains("2x2x2"));
}

#[test]
fn selftest_reports_each_check() {
    let o = softnc(&["selftest"]);
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 7);
    assert!(s.contains("FAIL,\"fixture classification matches reference\""));
    assert_eq!(s.matches("PASS").count(), 6);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_flags_are_rejected() {
    assert_eq!(softnc(&["--bogus", "selftest"]).status.code(), Some(3));
    assert_eq!(softnc(&["check", "x.json", "--props", "xyz"]).status.code(), Some(3));
}
