use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn kmforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmforge")).args(args).output().expect("binary runs")
}

fn gcm_file(name: &str, rows: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    write!(f, r#"{{"name": "{name}", "entries": {rows}}}"#).unwrap();
    f
}

fn json_reports(out: &Output) -> Vec<Value> {
    serde_json::from_slice::<Value>(&out.stdout).expect("stdout is JSON").as_array().unwrap().clone()
}

#[test]
fn classify_twisted_is_affine() {
    let f = gcm_file("twisted", "[[2,-4],[-1,2]]");
    let out = kmforge(&["classify", f.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_reports(&out);
    assert_eq!(r[0]["witnesses"][0]["tag"], "Affine");
}

#[test]
fn roots_of_case1_to_height_three() {
    let f = gcm_file("case1", "[[2,-2],[-2,2]]");
    let out = kmforge(&["roots", f.path().to_str().unwrap(), "--height", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_reports(&out);
    assert_eq!(r[0]["params"]["count"], 4);
    let roots: Vec<Value> = r[0]["witnesses"].as_array().unwrap().iter().map(|w| w["root"].clone()).collect();
    assert!(roots.contains(&serde_json::json!([2, 1])));
}

#[test]
fn prenilpotency_and_reduction() {
    let f = gcm_file("case1", "[[2,-2],[-2,2]]");
    let p = f.path().to_str().unwrap();
    let out = kmforge(&["prenil", p, "--alpha", "1,0", "--beta", "0,1", "--format", "json"]);
    assert_eq!(json_reports(&out)[0]["witnesses"][0]["prenilpotent"], false);
    let out = kmforge(&["prenil", p, "--alpha", "1,0", "--beta", "0,-1", "--format", "json"]);
    assert_eq!(json_reports(&out)[0]["witnesses"][0]["prenilpotent"], true);
    let a2 = gcm_file("affine_a2", "[[2,-1,-1],[-1,2,-1],[-1,-1,2]]");
    let out = kmforge(&["reduce", a2.path().to_str().unwrap(), "--gamma", "2,1,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let w = &json_reports(&out)[0]["witnesses"][0];
    assert_eq!(w["word"], serde_json::json!([1]));
    assert_eq!(w["alpha"], serde_json::json!([0, 1, 1]));
}

#[test]
fn verify_twisted_span_and_congruence() {
    let out = kmforge(&["verify", "case2", "--field", "5", "--trunc", "3", "--checks", "span,congruence", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports = json_reports(&out);
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let strip = |out: &Output| -> Vec<Value> {
        json_reports(out)
            .into_iter()
            .map(|mut r| {
                r["timings_ms"] = Value::Null;
                r
            })
            .collect()
    };
    let args = ["verify", "all", "--format", "json"];
    let one = Command::new(env!("CARGO_BIN_EXE_kmforge")).args(args).env("KMFORGE_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_kmforge")).args(args).env("KMFORGE_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(strip(&one), strip(&many));
}

#[test]
fn gate_and_usage_errors_exit_two() {
    let out = kmforge(&["verify", "case1", "--field", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_reports(&out)[0]["status"], "gate_failed");
    assert_eq!(kmforge(&["verify", "case1", "--field", "6"]).status.code(), Some(2));
    assert_eq!(kmforge(&["classify", "/nonexistent/gcm.json"]).status.code(), Some(2));
    let bad = gcm_file("bad", "[[2,1],[-1,2]]");
    assert_eq!(kmforge(&["classify", bad.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(kmforge(&["verify", "case9"]).status.code(), Some(2));
}

#[test]
fn pgroup_demo_reports_orders() {
    let out = kmforge(&["pgroup", "demo", "--which", "case1", "--field", "5", "--trunc", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let w = &json_reports(&out)[0]["witnesses"][0];
    assert_eq!(w["order"], 625);
}
