use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_morphic");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("MORPHIC_AP_PREFIX_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn schema() -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(doc: &Value) {
    let schema = schema();
    let v = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc:#}");
}

const INNER: &str = "alphabet: 0 1 2\nstart: 0\nrule: 0 -> 0 1\nrule: 1 -> 1 2 0\nrule: 2 -> 2\n";
const LEFT: &str = "alphabet: 0 1 2\nstart: 0\nrule: 0 -> 0 1\nrule: 1 -> 2 1 0\nrule: 2 -> 2\n";

#[test]
fn inner_bounded_letter_is_ap() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "inner.morph", INNER);
    let o = run(&["decide", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: AP"));
}

#[test]
fn left_tail_is_not_ap_with_witness() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "left.morph", LEFT);
    let o = run(&["decide", &f, "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["decision"]["verdict"], "NOT_AP");
    let w = &v["decision"]["witness"];
    assert_eq!(w["kind"], "tail-cycle");
    assert_eq!(w["side"], "left");
    assert_eq!(w["cycle"], serde_json::json!(["1"]));
    assert_eq!(w["from"], "1");
    assert_eq!(w["to"], "1");
    assert_eq!(w["label"], serde_json::json!(["2"]));
    assert_valid(&v);
}

#[test]
fn json_is_byte_identical_across_runs() {
    for name in [
        "thue-morse-constant",
        "bounded-left-tail",
        "binary-one-erased",
    ] {
        let src = format!("corpus:{name}");
        let a = run(&["decide", &src, "--json", "--verify", "--n-large", "20000"]);
        let b = run(&["decide", &src, "--json", "--verify", "--n-large", "20000"]);
        assert_eq!(a.stdout, b.stdout, "{name}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn every_corpus_report_matches_schema() {
    let list = run(&["corpus", "list", "--json"]);
    assert_eq!(list.status.code(), Some(0));
    let entries: Value = serde_json::from_slice(&list.stdout).unwrap();
    let entries = entries.as_array().unwrap();
    assert_eq!(entries.len(), 14);
    for e in entries {
        let name = e["name"].as_str().unwrap();
        let src = format!("corpus:{name}");
        let o = run(&[
            "decide",
            &src,
            "--json",
            "--verify",
            "--n-large",
            "20000",
            "--timings",
        ]);
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_valid(&v);
        assert_eq!(v["matches_expected"], true, "{name}");
        assert!(v["timings_ms"]["decide"].is_number());
        let expected = if v["expected"] == "AP" { 0 } else { 1 };
        assert_eq!(o.status.code(), Some(expected), "{name}");
    }
}

#[test]
fn timings_are_opt_in() {
    let o = run(&["decide", "corpus:fibonacci", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.get("timings_ms").is_none());
}

#[test]
fn missing_start_is_a_header_error() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "bad.morph",
        "alphabet: 0 1\nrule: 0 -> 0 1\nrule: 1 -> 1 0\n",
    );
    let o = run(&["decide", &f]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("header:"), "{err}");
    assert!(err.contains("start"), "{err}");

    let o = run(&["decide", &f, "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["line"], Value::Null);
    assert_valid(&v);
}

#[test]
fn bad_line_reports_its_number() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "bad.morph",
        "alphabet: 0 1\nstart: 0\nrule: 0 -> 0 x\nrule: 1 -> 1\n",
    );
    let o = run(&["decide", &f, "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["error"]["line"], 3);
    assert_valid(&v);
}

#[test]
fn erasing_beyond_two_letters_is_unsupported() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "erasing.morph",
        "alphabet: 0 1 2\nstart: 0\nrule: 0 -> 0 1 2\nrule: 1 ->\nrule: 2 -> 2 0\n",
    );
    let o = run(&["decide", &f, "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "unsupported");
    assert_eq!(v["decision"], Value::Null);
    assert_valid(&v);
}

#[test]
fn missing_file_exits_2() {
    let o = run(&["decide", "/nonexistent/x.morph"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["decide", "corpus:no-such-entry", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "io");
}

#[test]
fn generate_prints_prefixes() {
    let o = run(&["generate", "corpus:thue-morse", "--length", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "01101001");
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "inner.morph", INNER);
    let o = run(&["generate", &f, "--length", "11"]);
    assert_eq!(stdout(&o).trim(), "01120120201");
}

#[test]
fn gaps_csv() {
    let o = run(&[
        "gaps",
        "corpus:thue-morse",
        "--factor",
        "0",
        "--length",
        "8",
        "--length",
        "1",
        "--csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "factor,max_gap,prefix_length");
    assert_eq!(lines[1], "0,3,8");
    assert_eq!(lines[2], "0,inf,1");
}

#[test]
fn prefix_cap_override() {
    let o = Command::new(BIN)
        .args(["generate", "corpus:thue-morse", "--length", "100"])
        .env("MORPHIC_AP_PREFIX_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(BIN)
        .args(["generate", "corpus:thue-morse", "--length", "100"])
        .env("MORPHIC_AP_PREFIX_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(BIN)
        .args(["generate", "corpus:thue-morse", "--length", "10"])
        .env("MORPHIC_AP_PREFIX_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_show_round_trips() {
    let o = run(&["corpus", "show", "fibonacci"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "fib.morph", &stdout(&o));
    let o = run(&["decide", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("expected: AP (matched)"));
}

#[test]
fn classify_and_dot() {
    let o = run(&["classify", "corpus:bounded-left-tail", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["classification"]["bounded"], serde_json::json!(["2"]));
    let o = run(&["dot", "corpus:thue-morse"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("digraph"));
}

#[test]
fn small_crosscheck_passes() {
    let o = run(&[
        "crosscheck",
        "--binary-max-len",
        "2",
        "--uniform-count",
        "20",
        "--oracle-count",
        "10",
        "--oracle-small",
        "2000",
        "--oracle-large",
        "20000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn crosscheck_flags_a_wrong_expectation() {
    let dir = TempDir::new().unwrap();
    write(
        &dir,
        "tm.morph",
        "expect: NOT_AP\nalphabet: 0 1\nstart: 0\nrule: 0 -> 0 1\nrule: 1 -> 1 0\n",
    );
    let o = run(&[
        "crosscheck",
        "--corpus-dir",
        dir.path().to_str().unwrap(),
        "--binary-max-len",
        "1",
        "--uniform-count",
        "1",
        "--oracle-count",
        "1",
        "--oracle-small",
        "100",
        "--oracle-large",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn schema_rejects_malformed_reports() {
    let o = run(&["decide", "corpus:thue-morse", "--json"]);
    let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let schema = schema();
    let validator = jsonschema::validator_for(&schema).unwrap();
    assert!(validator.is_valid(&v));
    v["decision"]["verdict"] = "MAYBE".into();
    assert!(!validator.is_valid(&v));
    v["decision"]["verdict"] = "AP".into();
    v["surprise"] = 1.into();
    assert!(!validator.is_valid(&v));
}
