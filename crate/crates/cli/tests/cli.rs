//! End-to-end tests of the binary: exit codes, JSON shapes, and the
//! pattern round-trip.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn patternex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patternex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write_temp(name: &str, content: &str) -> String {
    let path = std::env::temp_dir().join(format!("patternex-test-{name}-{}", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(content.as_bytes()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn classify_reports_the_fixture_taxonomy() {
    let out = patternex(&["classify", "-p", "@Q1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["classNumber"], 2);
    assert_eq!(v["relaxedClassNumber"], 1);
    assert_eq!(v["acyclic"], true);
    assert_eq!(v["intervalChromaticNumber"], 2);

    let out = patternex(&["classify", "-p", "@Q2"]);
    let v = json_stdout(&out);
    assert_eq!(v["classNumber"], 2);
    assert_eq!(v["relaxedClassNumber"], 2);

    let out = patternex(&["classify", "-p", "@R"]);
    let v = json_stdout(&out);
    assert_eq!(v["verticallySeparable"], false);
    assert_eq!(v["horizontallySeparable"], false);
    assert_eq!(v["classNumber"], Value::Null);
}

#[test]
fn classify_round_trips_every_fixture() {
    for name in ["Q1", "Q2", "R", "S", "I2", "row4"] {
        let out = patternex(&["classify", "-p", &format!("@{name}")]);
        assert_eq!(out.status.code(), Some(0), "fixture {name}");
        let v = json_stdout(&out);
        let text = v["pattern"].as_str().unwrap();
        let reparsed = patternex_core::Pattern::parse(text).unwrap();
        assert_eq!(reparsed, patternex_core::fixtures::fixture(name).unwrap());
    }
}

#[test]
fn contains_self_is_the_identity_embedding() {
    let q1 = write_temp("q1", "1010\n1001\n0101\n");
    let out = patternex(&["contains", "-m", &q1, "-p", &q1]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["contains"], true);
    assert_eq!(v["embedding"]["rows"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["embedding"]["cols"], serde_json::json!([1, 2, 3, 4]));
}

#[test]
fn absence_is_a_definitive_answer() {
    let zero = write_temp("zero", "00\n00\n");
    let out = patternex(&["contains", "-m", &zero, "-p", "@row1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_stdout(&out)["contains"], false);
}

#[test]
fn extremal_matches_known_values() {
    let row2 = write_temp("row2", "11\n");
    let out = patternex(&["extremal", "-n", "2", "-p", &row2]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v[0]["maxWeight"], 2);

    let out = patternex(&[
        "extremal", "--table", "1..3", "-p", "@I2", "--format", "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n\tmaxWeight\tnodesExplored");
    assert!(lines[1].starts_with("1\t1\t"));
    assert!(lines[2].starts_with("2\t3\t"));
    assert!(lines[3].starts_with("3\t5\t"));
}

#[test]
fn extremal_budget_exhaustion_is_exit_two() {
    let out = patternex(&["extremal", "-n", "6", "-p", "@Q1", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn verify_flows_to_the_right_exit_codes() {
    // Too light to be a counterexample.
    let zero = write_temp("zero4", "0000\n0000\n0000\n0000\n");
    let out = patternex(&["verify", "-p", "@Q1", "-m", &zero]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_stdout(&out)["outcome"], "inconclusive");

    // Heavy under a gentle override and trivially containing the pattern.
    let ones = write_temp("ones12", &("111111111111\n".repeat(12)));
    let out = patternex(&["verify", "-p", "@Q1", "-m", &ones, "--b", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["outcome"], "embedding");
}

#[test]
fn embed_without_a_bound_is_a_plain_search() {
    let q1 = write_temp("q1e", "1010\n1001\n0101\n");
    let out = patternex(&["embed", "-p", "@Q1", "-m", &q1, "-k", "4", "-u", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_stdout(&out)["outcome"], "embedding");

    let zero = write_temp("zero8", "00000000\n00000000\n");
    let out = patternex(&["embed", "-p", "@I2", "-m", &zero, "-k", "2", "-u", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_stdout(&out)["outcome"], "absent");
}

#[test]
fn usage_and_input_errors_are_exit_one() {
    let out = patternex(&["contains", "-m", "/no/such/file", "-p", "@Q1"]);
    assert_eq!(out.status.code(), Some(1));

    let ragged = write_temp("ragged", "101\n10\n");
    let out = patternex(&["classify", "-p", &ragged]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = patternex(&["classify", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));

    let out = patternex(&["params", "-p", "@row3"]);
    assert_eq!(out.status.code(), Some(1));

    let out = patternex(&["extremal", "-p", "@Q1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_is_definitive() {
    let out = patternex(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("classify"));
}

#[test]
fn params_reports_the_derived_constants() {
    let out = patternex(&["params", "-p", "@Q1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["s"], 2);
    assert_eq!(v["k"], 4);
    let b = v["b"].as_f64().unwrap();
    assert!((b - 56.897).abs() < 1e-2);
}
