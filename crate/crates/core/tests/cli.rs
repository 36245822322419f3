use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn h1dil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_h1dil")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn verify_exit_codes() {
    assert_eq!(h1dil(&["verify", "--samples", "2000"]).status.code(), Some(0));
    assert_eq!(h1dil(&["--gauge", "oscillatory", "verify", "--samples", "2000"]).status.code(), Some(0));
    let o = h1dil(&["--gauge", r#"{"type":"power","exponent":0.5}"#, "verify"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("convex"), "{}", stderr(&o));
}

#[test]
fn probe_a_summaries() {
    let o = h1dil(&["--format", "structured", "probe", "a", "--ubar", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let t = &v["traces"][0];
    assert_eq!(t["outcome"], "converged");
    assert!(t["classification"]["limit"].as_f64().unwrap().abs() < 1e-4);
    assert_eq!(t["gauge"], "linear");
    assert_eq!(t["grid"]["count"], 37);

    let o = h1dil(&["--gauge", "oscillatory", "--format", "structured", "probe", "a"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c = &v["traces"][0]["classification"];
    assert_eq!(c["kind"], "oscillating");
    assert!(c["limsup"].as_f64().unwrap() - c["liminf"].as_f64().unwrap() >= 0.5);
}

#[test]
fn probe_writes_traces_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("beta");
    let o = h1dil(&["--gauge", "oscillatory", "probe", "beta", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(listing(&out), ["beta.csv", "summary.json"]);
    let csv = fs::read_to_string(out.join("beta.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("epsilon,x1,x2,xbar"));
    assert_eq!(lines.count(), 37);
}

#[test]
fn usage_errors_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("none");
    let o = h1dil(&["--count", "2", "probe", "beta", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let o = h1dil(&["--count", "2000", "probe", "a", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("underflow"));
    assert!(!out.exists());
    assert_eq!(h1dil(&["--box", "2", "verify"]).status.code(), Some(2));
    assert_eq!(h1dil(&["probe", "beta", "--p", "1,2"]).status.code(), Some(2));
    assert_eq!(h1dil(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn counterexample_outcomes() {
    let o = h1dil(&["counterexample"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = h1dil(&["--gauge", "linear", "counterexample"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("counterexample pattern not reproduced: all limits converge"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"type":"piecewise","breakpoints":[1,2,3],"values":[1,1.5,1.7]}"#).unwrap();
    let out = dir.path().join("out");
    let o = h1dil(&["--gauge", bad.to_str().unwrap(), "counterexample", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("slope"), "{}", stderr(&o));
    assert!(!out.exists());
    let missing = dir.path().join("missing.json");
    assert_eq!(h1dil(&["--gauge", missing.to_str().unwrap(), "counterexample"]).status.code(), Some(2));
}

#[test]
fn gauge_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("osc.json");
    fs::write(&path, r#"{"type":"oscillatory","M":10,"r":0.001,"levels":8}"#).unwrap();
    let o = h1dil(&["--gauge", path.to_str().unwrap(), "gauge-check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    let o = h1dil(&["--gauge", r#"{"type":"linear","extra":1}"#, "gauge-check"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn metric_diff_reports_witness() {
    let o = h1dil(&["--gauge", "oscillatory", "probe", "metric-diff"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not differentiable, witness"), "{}", stdout(&o));
    let o = h1dil(&["probe", "metric-diff", "--base", "0.5,-1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("converge uniformly"));
}
