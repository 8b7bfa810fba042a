//! End-to-end tests driving the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skewminor"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const FIXTURE_4X4: &str = r#"{
  "field": { "kind": "rational" },
  "labels": ["1", "2", "3", "4"],
  "rows": [
    ["0", "1", "1", "1"],
    ["-1", "0", "1", "2"],
    ["-1", "-1", "0", "3"],
    ["-1", "-2", "-3", "0"]
  ],
  "skew": true
}"#;

#[test]
fn generate_matches_golden_fixture() {
    let out = run(&["generate", "random-dense", "--n", "6", "--field", "p=7", "--seed", "42"]);
    assert!(out.status.success());
    let golden = std::fs::read(fixture("random_dense_n6_p7_s42.json")).unwrap();
    assert_eq!(out.stdout, golden, "generator output must be byte-identical");
}

#[test]
fn generate_is_deterministic_and_validates_params() {
    let a = run(&["generate", "random-dense", "--n", "5", "--field", "p=11", "--seed", "7"]);
    let b = run(&["generate", "random-dense", "--n", "5", "--field", "p=11", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    // bad modulus is an input error
    let bad = run(&["generate", "random-dense", "--n", "5", "--field", "p=9", "--seed", "7"]);
    assert_eq!(bad.status.code(), Some(2));
    // odd skew-cycle order is rejected
    let bad = run(&["generate", "skew-cycle", "--n", "5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn compare_exit_codes_follow_the_cycle_example() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a6.json");
    let b = dir.path().join("b6.json");
    assert!(run(&["generate", "skew-cycle", "--n", "6", "--variant", "a", "-o", a.to_str().unwrap()]).status.success());
    assert!(run(&["generate", "skew-cycle", "--n", "6", "--variant", "b", "-o", b.to_str().unwrap()]).status.success());

    let eq = run(&["compare", a.to_str().unwrap(), b.to_str().unwrap(), "--order", "5"]);
    assert_eq!(eq.status.code(), Some(0));
    let v = stdout_json(&eq);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["verdict"]["equivalent"], true);

    let ne = run(&["compare", a.to_str().unwrap(), b.to_str().unwrap(), "--order", "6"]);
    assert_eq!(ne.status.code(), Some(1));
    let v = stdout_json(&ne);
    assert_eq!(v["status"], "negative");
    let subset = v["verdict"]["witness_subset"].as_array().unwrap();
    assert_eq!(subset.len(), 6, "the full set is the differing subset");

    // self-comparison is affirmative at any order
    let same = run(&["compare", a.to_str().unwrap(), a.to_str().unwrap(), "--order", "6"]);
    assert_eq!(same.status.code(), Some(0));
}

#[test]
fn analyze_reports_structure() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_tmp(&dir, "fixture.json", FIXTURE_4X4);
    let out = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"]["skew"], true);
    assert_eq!(v["verdict"]["dense"], true);
    assert_eq!(v["verdict"]["hl_indecomposable"], true);
    // constant first row: {1} and its complement form a clan-partition
    assert_eq!(v["verdict"]["separable"], true);
    assert_eq!(
        v["verdict"]["clan_partition"],
        serde_json::json!([["1"], ["2", "3", "4"]])
    );
    // digests are present for provenance
    assert!(v["inputs"][0]["sha256"].as_str().unwrap().len() == 64);

    // a cycle is not dense
    let c = dir.path().join("c.json");
    run(&["generate", "skew-cycle", "--n", "6", "-o", c.to_str().unwrap()]);
    let v = stdout_json(&run(&["analyze", c.to_str().unwrap()]));
    assert_eq!(v["verdict"]["dense"], false);

    // malformed file is an input error
    let bad = write_tmp(&dir, "bad.json", "{ not json");
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["status"], "input-error");
}

#[test]
fn witness_round_trip_through_apply() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_tmp(&dir, "a.json", FIXTURE_4X4);
    let w = write_tmp(
        &dir,
        "w.json",
        r#"{ "transposed": false, "signs": { "1": 1, "2": -1, "3": 1, "4": -1 } }"#,
    );
    let b = dir.path().join("b.json");
    let out = run(&["apply", a.to_str().unwrap(), w.to_str().unwrap(), "-o", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["witness", a.to_str().unwrap(), b.to_str().unwrap(), "--verify-input"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["verdict"]["transposed"], false);

    // emitted witness re-applies to reproduce B
    let w2 = write_tmp(
        &dir,
        "w2.json",
        &serde_json::to_string(&v["verdict"]).unwrap(),
    );
    let out = run(&["apply", a.to_str().unwrap(), w2.to_str().unwrap()]);
    let image = stdout_json(&out)["verdict"].clone();
    let b_text: Value = serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    assert_eq!(image, b_text);

    // identical inputs give the all-plus witness
    let out = run(&["witness", a.to_str().unwrap(), a.to_str().unwrap()]);
    let v = stdout_json(&out);
    for z in ["1", "2", "3", "4"] {
        assert_eq!(v["verdict"]["signs"][z], 1);
    }
}

#[test]
fn witness_negative_on_decomposable_input() {
    let dir = tempfile::tempdir().unwrap();
    // all-upper-ones is HL-decomposable; recovery must refuse with exit 1
    let text = r#"{
      "field": { "kind": "rational" },
      "labels": ["1", "2", "3", "4"],
      "rows": [
        ["0", "1", "1", "1"],
        ["-1", "0", "1", "1"],
        ["-1", "-1", "0", "1"],
        ["-1", "-1", "-1", "0"]
      ]
    }"#;
    let a = write_tmp(&dir, "dec.json", text);
    let out = run(&["witness", a.to_str().unwrap(), a.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "negative");
    assert!(v["certificate"].is_string());
}

#[test]
fn minors_dump_feeds_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_tmp(&dir, "a.json", FIXTURE_4X4);
    let t = dir.path().join("t.json");
    let out = run(&["minors", a.to_str().unwrap(), "--order", "4", "-o", t.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["reconstruct", t.to_str().unwrap(), "--field", "rational"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let reps = v["verdict"]["representatives"].as_array().unwrap();
    assert_eq!(reps.len(), 2, "fixture has exactly two gauge-fixed solutions");

    // tampering an order-3 minor to a nonzero value is a certified negative
    let mut table: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    for e in table["minors"].as_array_mut().unwrap() {
        if e["subset"].as_array().unwrap().len() == 3 {
            e["value"] = Value::String("1".into());
        }
    }
    let bad = write_tmp(&dir, "bad_table.json", &table.to_string());
    let out = run(&["reconstruct", bad.to_str().unwrap(), "--field", "rational"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["status"], "negative");
}

#[test]
fn minors_respect_thread_env() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    run(&["generate", "random-dense", "--n", "7", "--field", "p=7", "--seed", "3", "-o", a.to_str().unwrap()]);
    let single = run(&["minors", a.to_str().unwrap()]);
    let multi = bin()
        .args(["minors", a.to_str().unwrap()])
        .env("SKEWMINOR_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(single.stdout, multi.stdout, "worker count must not change output");
}

#[test]
fn pu_check_modes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let good = r#"{
      "field": { "kind": "rational" },
      "labels": ["1", "2", "3", "4"],
      "rows": [
        ["0", "1", "1", "1"],
        ["-1", "0", "1", "1"],
        ["-1", "-1", "0", "1"],
        ["-1", "-1", "-1", "0"]
      ]
    }"#;
    let g = write_tmp(&dir, "good.json", good);
    for mode in ["direct", "wesp"] {
        let out = run(&["pu-check", g.to_str().unwrap(), "--mode", mode]);
        assert_eq!(out.status.code(), Some(0), "mode {mode}");
        assert_eq!(stdout_json(&out)["verdict"]["principally_unimodular"], true);
    }
    // flipping a_13 makes the order-4 minor 9
    let bad = good.replace(
        r#"["0", "1", "1", "1"]"#,
        r#"["0", "1", "-1", "1"]"#,
    );
    let bad = bad.replace(
        r#"["-1", "-1", "0", "1"]"#,
        r#"["1", "-1", "0", "1"]"#,
    );
    let b = write_tmp(&dir, "bad.json", &bad);
    for mode in ["direct", "wesp"] {
        let out = run(&["pu-check", b.to_str().unwrap(), "--mode", mode]);
        assert_eq!(out.status.code(), Some(1), "mode {mode}");
    }
    // entries outside {-1, 0, 1} are an input error in direct mode
    let f = write_tmp(&dir, "f.json", FIXTURE_4X4);
    let out = run(&["pu-check", f.to_str().unwrap(), "--mode", "direct"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flip_family_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    run(&["generate", "random-dense", "--n", "5", "--field", "p=7", "--seed", "1", "-o", a.to_str().unwrap()]);
    // empty set: unchanged
    let out = run(&["generate", "flip", "--input", a.to_str().unwrap(), "--set", ""]);
    assert_eq!(stdout_json(&out), serde_json::from_str::<Value>(&std::fs::read_to_string(&a).unwrap()).unwrap());
    // flip twice on the same set: unchanged
    let once = dir.path().join("once.json");
    run(&["generate", "flip", "--input", a.to_str().unwrap(), "--set", "2,3", "-o", once.to_str().unwrap()]);
    let twice = run(&["generate", "flip", "--input", once.to_str().unwrap(), "--set", "2,3"]);
    assert_eq!(stdout_json(&twice), serde_json::from_str::<Value>(&std::fs::read_to_string(&a).unwrap()).unwrap());
    // missing --set is an input error
    let out = run(&["generate", "flip", "--input", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // unknown label is an input error
    let out = run(&["generate", "flip", "--input", a.to_str().unwrap(), "--set", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn skew_flag_violations_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
      "field": { "kind": "rational" },
      "labels": ["1", "2"],
      "rows": [["0", "1"], ["1", "0"]],
      "skew": true
    }"#;
    let f = write_tmp(&dir, "notskew.json", text);
    let out = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
