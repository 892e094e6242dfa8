//! End-to-end subprocess tests of the command-line interface.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quartica"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary launches")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn write_klein(path: &Path) {
    let out = run(&["klein", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn klein_then_gram_prints_the_expected_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let dat = dir.path().join("klein.dat");
    write_klein(&dat);
    let out = run(&["gram", "--input", dat.to_str().unwrap(), "--indices", "1,2,3"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "[[3,-1,-1],[-1,3,-1],[-1,-1,3]]\n");
    let out = run(&["gram", "--input", dat.to_str().unwrap(), "--indices", "1,2,4"]);
    assert_eq!(stdout_of(&out), "[[3,-1,-1],[-1,3,1],[-1,1,3]]\n");
}

#[test]
fn indices_accept_names_and_positions_interchangeably() {
    let by_pos = run(&["gram", "--indices", "1,2,3"]);
    let by_name = run(&["gram", "--indices", "L1,L2,L3"]);
    assert!(by_pos.status.success() && by_name.status.success());
    assert_eq!(stdout_of(&by_pos), stdout_of(&by_name));
}

#[test]
fn invariants_reports_the_three_distinguishing_pairs() {
    for (indices, expected) in [
        ("1,2,3,5", "(0, 4)\n"),
        ("1,2,3,6", "(2, 2)\n"),
        ("1,2,4,7", "(4, 0)\n"),
    ] {
        let out = run(&["invariants", "--indices", indices]);
        assert!(out.status.success());
        assert_eq!(stdout_of(&out), expected, "indices {indices}");
    }
}

#[test]
fn classify_splits_the_distinguished_lines_into_three_classes() {
    let out = run(&[
        "classify",
        "--indices",
        "1,2,3,4,5,6,7",
        "--size",
        "4",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("(0, 4): 1 subset\n"));
    assert!(text.contains("(2, 2): 26 subsets\n"));
    assert!(text.contains("(4, 0): 8 subsets\n"));
    assert!(text.contains("classes: 3"));
}

#[test]
fn connected_agrees_with_the_oracle() {
    let out = run(&["connected", "--indices", "1,2,3", "--oracle"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("connected number: 2"));
    assert!(text.contains("oracle agrees: 2"));
    let out = run(&["connected", "--indices", "1,2,4", "--oracle"]);
    assert!(stdout_of(&out).contains("connected number: 1"));
}

#[test]
fn verify_passes_on_the_builtin_dataset() {
    let out = run(&["verify"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("28 lines: all bitangent"));
    assert!(text.contains("7 stored sections: all verified"));
}

#[test]
fn derive_sections_output_verifies_and_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let full1 = dir.path().join("full1.dat");
    let full2 = dir.path().join("full2.dat");
    for path in [&full1, &full2] {
        let out = run(&["derive-sections", "--output", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read(&full1).unwrap(),
        std::fs::read(&full2).unwrap(),
        "derivation is deterministic"
    );
    let out = run(&["verify", "--input", full1.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("28 stored sections: all verified"));
}

#[test]
fn structured_reports_are_byte_identical_across_runs() {
    let a = run(&["gram", "--indices", "1,2,3", "--format", "structured"]);
    let b = run(&["gram", "--indices", "1,2,3", "--format", "structured"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let value: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(value["format"], "quartica-report");
    assert_eq!(value["results"]["matrix"][0][1], -1);
    assert_eq!(value["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn find_bitangents_recovers_all_28() {
    let out = run(&["find-bitangents", "--expected", "28", "--format", "structured"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["results"]["count"], 28);
}

#[test]
fn usage_and_schema_errors_exit_2() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["gram", "--indices", "1,2,99"],
        vec!["gram", "--indices", "1,2,nope"],
        vec!["connected", "--indices", "1,2"],
        vec!["gram", "--input", "/nonexistent.dat", "--indices", "1,2,3"],
        vec!["no-such-subcommand"],
        vec!["gram", "--no-such-flag"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dat");
    std::fs::write(&bad, "{\"format\": \"wrong\"}").unwrap();
    let out = run(&["verify", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1_with_a_diagnostic_report() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("hyperflex.dat");
    std::fs::write(
        &bad,
        r#"{
  "format": "quartica-dataset",
  "version": 1,
  "field": 4,
  "curve": { "p": [], "q": [], "r": [["0","0"],["0","0"],["0","0"],["0","0"],["1","0"]] },
  "lines": [ { "name": "L", "a": ["0", "0"], "b": ["0", "0"] } ]
}
"#,
    )
    .unwrap();
    let out = run(&["verify", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("FAIL"));

    let report = dir.path().join("report.json");
    let out = bin()
        .args([
            "find-bitangents",
            "--expected",
            "99",
            "--seeds",
            "50",
            "--output",
            report.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(&report).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(value["diagnostics"][0]
        .as_str()
        .unwrap()
        .contains("28 lines where 99 were expected"));
}

#[test]
fn dataset_written_to_stdout_round_trips_through_a_file() {
    let out = run(&["klein"]);
    assert!(out.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.dat");
    std::fs::write(&path, &out.stdout).unwrap();
    let reread = run(&["verify", "--input", path.to_str().unwrap()]);
    assert!(reread.status.success());
}
