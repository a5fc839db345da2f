use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn nilbracket(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilbracket"))
        .args(args)
        .output()
        .expect("spawn nilbracket")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

const DOC: &str = r#"{
  "schema": 1,
  "fields": {
    "f": [[{"c": [1, 1], "e": [0, 1]}], []],
    "g": [[], [{"c": [1, 1], "e": [1, 0]}]]
  },
  "kernels": {
    "a": {"p": 1, "dim": 2, "entries": [{"component": 0, "slots": [0], "poly": [{"c": [1, 1], "e": [0, 1]}]}]},
    "b": {"p": 1, "dim": 2, "entries": [{"component": 1, "slots": [1], "poly": [{"c": [1, 1], "e": [1, 0]}]}]}
  }
}"#;

fn doc_file() -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    fs::write(f.path(), DOC).unwrap();
    f
}

#[test]
fn passing_suite_exits_zero() {
    let out = nilbracket(&["verify", "--suite", "general-jacobi", "--dim", "2", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_end().ends_with("PASS"), "{text}");
}

#[test]
fn failing_suite_exits_one() {
    let out = nilbracket(&["verify", "--suite", "icon-antisymmetry", "--trials", "6", "--no-realign", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], false);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "--suite", "no-such-suite"],
        vec!["verify", "--suite", "weil-ring", "--tol", "0.1"],
        vec!["verify", "--suite", "fn-lemma-4-6", "--degrees", "1,2"],
        vec!["verify"],
        vec!["frobnicate"],
        vec!["bracket", "--input", "/no/such/file.json", "--kind", "vector-field"],
    ] {
        let out = nilbracket(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn malformed_input_exits_two() {
    let f = tempfile::NamedTempFile::new().unwrap();
    fs::write(f.path(), r#"{"fields": {"f": [[{"c": [1, 0], "e": [1]}]]}}"#).unwrap();
    let out = nilbracket(&["bracket", "--input", f.path().to_str().unwrap(), "--kind", "vector-field"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fields.f"));
}

#[test]
fn vector_field_bracket_of_fixed_fields() {
    let f = doc_file();
    let out = nilbracket(&["bracket", "--input", f.path().to_str().unwrap(), "--kind", "vector-field", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    let expected: Value = serde_json::from_str(
        r#"[[{"c": [-1, 1], "e": [1, 0]}], [{"c": [1, 1], "e": [0, 1]}]]"#,
    )
    .unwrap();
    assert_eq!(v["bracket"], expected);
}

#[test]
fn fn_form_bracket_is_verified() {
    let f = doc_file();
    let out = nilbracket(&[
        "bracket", "--input", f.path().to_str().unwrap(), "--kind", "fn-form", "--left", "a", "--right", "b", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["bracket"]["p"], 2);
    assert!(v["verified_cubes"].as_u64().unwrap() > 0);
}

#[test]
fn icon_and_distribution_brackets() {
    let f = tempfile::NamedTempFile::new().unwrap();
    fs::write(
        f.path(),
        r#"{
          "icons": {
            "x": {"family": "point-flow", "base": [[1, 1]], "velocity": [[2, 1]]},
            "y": {"family": "point-flow", "base": [[0, 1]], "velocity": [[3, 1]]}
          },
          "test_maps": {
            "h": {"vars": 2, "components": [[{"c": [1, 1], "e": [2, 1]}]]}
          }
        }"#,
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    for kind in ["icon", "distribution"] {
        let out = nilbracket(&["bracket", "--input", path, "--kind", kind, "--json"]);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["schema"], 1);
    }
}

#[test]
fn stdin_input() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_nilbracket"))
        .args(["bracket", "--input", "-", "--kind", "vector-field", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(DOC.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["left"], "f");
}

#[test]
fn report_file_replays_to_the_same_failures() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let report = report.to_str().unwrap();
    let first = nilbracket(&[
        "verify", "--suite", "icon-jacobi", "--trials", "6", "--no-realign", "--report", report,
    ]);
    assert_eq!(first.status.code(), Some(1));
    let saved: Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    let failing = saved["suites"][0]["failing"].as_array().unwrap().clone();
    assert!(!failing.is_empty());

    let replay = nilbracket(&["verify", "--replay", report, "--json"]);
    assert_eq!(replay.status.code(), Some(1));
    let again = json(&replay);
    let trials = |v: &[Value]| v.iter().map(|f| f["trial"].clone()).collect::<Vec<_>>();
    assert_eq!(
        trials(&failing),
        trials(again["suites"][0]["failing"].as_array().unwrap())
    );
}

#[test]
fn seeded_runs_are_reproducible() {
    let run = |workers: &str| {
        let out = nilbracket(&["verify", "--suite", "convolution-laws", "--trials", "4", "--workers", workers, "--json"]);
        let mut v = json(&out);
        for s in v["suites"].as_array_mut().unwrap() {
            s.as_object_mut().unwrap().remove("elapsed_ms");
        }
        v
    };
    assert_eq!(run("1"), run("2"));
}

#[test]
fn demo_runs() {
    let out = nilbracket(&["demo"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[f, g]_1 = -1·x1"), "{text}");
}
