use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn kfulton(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kfulton")).args(args).output().expect("run kfulton")
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).display().to_string()
}

fn guards(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/guards").join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn fulton_prints_the_class() {
    let out = kfulton(&["fulton", &corpus("03-square-of-maximal.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("P(t) = 3 + t"), "{}", stdout(&out));
}

#[test]
fn fulton_json_to_stdout() {
    let out = kfulton(&["--json", "-", "fulton", &corpus("05-x2-y3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["text"], "6");
    assert_eq!(v["length"], 6);
}

#[test]
fn json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = kfulton(&["--json", path.to_str().unwrap(), "hilbert", &corpus("04-x2-y2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["length"], 4);
    assert_eq!(v["multiplicity"], 4);
}

#[test]
fn check_embedding_agrees_across_presentations() {
    let out = kfulton(&["check-embedding", &corpus("03-square-of-maximal.json"), &corpus("17-square-of-maximal-auto-seed12.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn check_embedding_rejects_different_lengths() {
    let out = kfulton(&["check-embedding", &corpus("01-double-point.json"), &corpus("02-triple-point.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn lci_reports_first_strict_weight() {
    let out = kfulton(&["lci", &corpus("03-square-of-maximal.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("FAIL-lci (first strict weight 2)"), "{}", stdout(&out));
    let out = kfulton(&["lci", "--max-weight", "3", &corpus("04-x2-y2.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS-lci"));
}

#[test]
fn virtual_check_passes_on_regular_sections() {
    let out = kfulton(&["--json", "-", "virtual", &corpus("04-x2-y2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["chi"], 4);
}

#[test]
fn virtual_without_sections_is_an_input_error() {
    let out = kfulton(&["virtual", &corpus("02-triple-point.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn low_weight_cap_is_a_resource_limit() {
    let out = kfulton(&["--weight-cap", "1", "virtual", &corpus("04-x2-y2.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weight cap 1"));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = kfulton(&["fulton", "/nonexistent/scheme.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn guard_exit_codes() {
    let cases = [("non-artinian", "200000", 2), ("budget", "10", 3), ("violation", "200000", 1)];
    for (dir, budget, want) in cases {
        let out = kfulton(&["--spair-budget", budget, "suite", guards(dir).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(want), "{dir}: {}", stdout(&out));
    }
}

#[test]
fn suite_report_has_no_timing() {
    let out = kfulton(&["--json", "-", "suite", "--sequential", guards("non-artinian").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(!text.contains("elapsed"));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schemes"][0]["verdict"], "PASS");
    assert_eq!(v["schemes"][1]["error"]["class"], "input-error");
}
