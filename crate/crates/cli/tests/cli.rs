use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_orehom");

fn catalogue() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/catalogue.json")
}

fn orehom(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const MINIMAL: &str = r#"{
  "name": "minimal",
  "algebras": [{"name": "T2", "builtin": "upper-triangular", "k": 2, "expect": {"gldim": 1, "bidim": 1}}],
  "morphisms": [{"name": "conj", "algebra": "T2", "inner": ["1", "1", "2"]}],
  "derivations": [{"name": "d", "alpha": "conj", "inner": ["0", "1", "0"]}],
  "signatures": [{"name": "T2[t;inner]", "kind": "polynomial", "alpha": "conj", "delta": "d"}],
  "suites": ["ore-axioms", "differentials", "bounds"],
  "parameters": {"trials": 8, "samples": 4}
}"#;

#[test]
fn lists_suites() {
    let out = orehom(&["suites"]);
    assert!(out.status.success());
    let names: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(names.len(), 10);
    assert!(names.contains(&"crossed".to_string()));
}

#[test]
fn minimal_scenario_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "s.json", MINIMAL);
    let out = orehom(&["run", &path]);
    assert_eq!(out.status.code(), Some(0), "{}{}", stdout(&out), stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS ore-axioms"), "{text}");
    assert!(text.contains("PASS bounds"), "{text}");
    assert!(text.lines().last().unwrap().starts_with("PASSED"), "{text}");
}

#[test]
fn undefined_morphism_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "s.json", &MINIMAL.replace(r#""alpha": "conj", "delta""#, r#""alpha": "conjugate", "delta""#));
    let out = orehom(&["run", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("at /signatures/0/alpha: unknown morphism \"conjugate\""), "{err}");
}

#[test]
fn bad_derivation_is_rejected_with_a_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
      "name": "bad",
      "algebras": [{"name": "D", "builtin": "truncated-polynomial", "k": 2}],
      "morphisms": [{"name": "id", "algebra": "D", "identity": true}],
      "derivations": [{"name": "d", "alpha": "id", "matrix": [["0", "1"], ["0", "0"]]}],
      "signatures": [{"name": "D[t;d]", "kind": "polynomial", "alpha": "id", "delta": "d"}]
    }"#;
    let out = orehom(&["run", &write(&dir, "s.json", text)]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("at /derivations/0"), "{err}");
    assert!(err.contains("Leibniz fails on (eps, eps)"), "{err}");
}

#[test]
fn syntax_errors_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "s.json", "{\n  \"name\": \"x\",\n  \"algebras\": [,]\n}\n");
    let out = orehom(&["run", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3, column"), "{}", stderr(&out));
}

#[test]
fn wrong_expectation_is_a_verification_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "s.json", &MINIMAL.replace(r#""gldim": 1"#, r#""gldim": 2"#));
    let out = orehom(&["run", &path, "--suite", "bounds"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("FAIL bounds"), "{text}");
    assert!(text.contains("witness:"), "{text}");
}

#[test]
fn unknown_suite_flag_is_an_input_error() {
    let out = orehom(&["run", catalogue().to_str().unwrap(), "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown suite \"nope\""));
}

fn json_run(path: &str, extra: &[&str]) -> Value {
    let mut args = vec!["run", path, "--format", "json"];
    args.extend_from_slice(extra);
    let out = orehom(&args);
    assert!(out.status.code() == Some(0) || out.status.code() == Some(1), "{}", stderr(&out));
    serde_json::from_str(&stdout(&out)).expect("report is JSON")
}

/// Checks `required` keys of the shipped report schema, recursing through
/// `properties` and `items`.
fn conforms(value: &Value, schema: &Value, at: &str) {
    if let Some(req) = schema.get("required").and_then(Value::as_array) {
        for key in req {
            let key = key.as_str().unwrap();
            assert!(value.get(key).is_some(), "{at} lacks {key}");
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
            for key in value.as_object().unwrap().keys() {
                assert!(props.contains_key(key), "{at}: unexpected key {key}");
            }
        }
        for (key, sub) in props {
            if let Some(v) = value.get(key) {
                conforms(v, sub, &format!("{at}/{key}"));
            }
        }
    }
    if let Some(choices) = schema.get("enum").and_then(Value::as_array) {
        assert!(choices.contains(value), "{at}: {value} not in {choices:?}");
    }
    match schema.get("type").and_then(Value::as_str) {
        Some("boolean") => assert!(value.is_boolean(), "{at}"),
        Some("integer") => assert!(value.is_u64(), "{at}"),
        Some("string") => assert!(value.is_string(), "{at}"),
        Some("object") => assert!(value.is_object(), "{at}"),
        Some("array") => {
            let items = value.as_array().unwrap_or_else(|| panic!("{at} is not an array"));
            if let Some(sub) = schema.get("items") {
                for (i, v) in items.iter().enumerate() {
                    conforms(v, sub, &format!("{at}/{i}"));
                }
            }
        }
        _ => {}
    }
}

#[test]
fn catalogue_passes_and_report_matches_schema() {
    let report = json_run(catalogue().to_str().unwrap(), &["--trials", "10", "--samples", "4"]);
    assert_eq!(report["passed"], Value::Bool(true), "{report:#}");
    assert_eq!(report["suites"].as_array().unwrap().len(), 10);
    assert_eq!(report["summary"]["failed"], 0);
    let schema: Value = serde_json::from_str(&stdout(&orehom(&["schema", "report"]))).unwrap();
    conforms(&report, &schema, "");
    let tempered = report["suites"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["name"] == "crossed")
        .unwrap()["cases"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["key"] == "tempered Q[eps]/2eps")
        .unwrap()
        .clone();
    assert_eq!(tempered["status"], "pass");
    assert_eq!(tempered["notes"]["observed"], "not tempered", "{tempered:#}");
}

#[test]
fn json_reports_are_deterministic_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "s.json", MINIMAL);
    let mut a = json_run(&path, &["--seed", "7"]);
    let mut b = json_run(&path, &["--seed", "7"]);
    assert!(a.as_object_mut().unwrap().remove("timing").is_some());
    b.as_object_mut().unwrap().remove("timing");
    assert_eq!(a, b);
    assert_eq!(a["parameters"]["seed"], 7);
    assert_eq!(a["scenario"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "s.json", MINIMAL);
    let target = dir.path().join("report.json");
    let out = orehom(&["run", &path, "--suite", "ore-axioms", "--format", "json", "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(report["suites"][0]["name"], "ore-axioms");
}

#[test]
fn fmt_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let once = stdout(&orehom(&["fmt", catalogue().to_str().unwrap()]));
    let path = write(&dir, "c.json", &once);
    let twice = stdout(&orehom(&["fmt", &path]));
    assert_eq!(once, twice);
    // formatting does not change the scenario hash
    let h1 = json_run(catalogue().to_str().unwrap(), &["--suite", "retraction"])["scenario"]["sha256"].clone();
    let h2 = json_run(&path, &["--suite", "retraction"])["scenario"]["sha256"].clone();
    assert_eq!(h1, h2);
}

#[test]
fn shipped_files_parse() {
    let schema: Value = serde_json::from_str(&stdout(&orehom(&["schema", "scenario"]))).unwrap();
    let props = schema["properties"].as_object().unwrap();
    let scenario: Value = serde_json::from_str(&std::fs::read_to_string(catalogue()).unwrap()).unwrap();
    for key in scenario.as_object().unwrap().keys() {
        assert!(props.contains_key(key), "schema lacks {key}");
    }
    let suites: Vec<Value> = stdout(&orehom(&["suites"])).lines().map(|s| Value::String(s.into())).collect();
    assert_eq!(props["suites"]["items"]["enum"].as_array().unwrap(), &suites);
}
