//! Exit codes and output of the `shortlist` binary.

use std::process::{Command, Output};

use shortlist::bound_cardinality;

fn shortlist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shortlist")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn help_exits_zero() {
    let out = shortlist(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    for sub in ["run", "bounds", "validate", "hardness-gen"] {
        assert!(stdout(&out).contains(sub), "help lists {sub}");
        assert_eq!(shortlist(&[sub, "--help"]).status.code(), Some(0));
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["run", "--bogus"][..],
        &["frobnicate"],
        &[],
        &["run", "--algorithm", "knapsack"],
        &["run", "--k", "many"],
        &["run", "--trials", "0"],
        &["run", "--function", "cube"],
        &["run", "--constraint", "partition:2:1"],
        &["bounds", "--algorithm", "matchoid"],
        &["bounds", "--algorithm", "cardinality", "--k", "4"],
    ] {
        let out = shortlist(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn runtime_errors_exit_one() {
    // default α = 4 at ε = 0.5 needs k ≥ 10.66
    let out = shortlist(&["run", "--k", "10", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds k = 10"));
    assert_eq!(shortlist(&["hardness-gen", "--n", "10", "--k", "3"]).status.code(), Some(1));
    assert_eq!(shortlist(&["validate", "--instance", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn bounds_prints_the_cardinality_report() {
    let out = shortlist(&["bounds", "--k", "100", "--beta", "2", "--algorithm", "cardinality"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let expected = bound_cardinality(100, 2);
    assert_eq!(json["report"]["recursion"].as_f64(), Some(expected.recursion));
    assert_eq!(json["report"]["exponential"].as_f64(), Some(expected.exponential));
    assert_eq!(json["report"]["q"].as_f64(), Some(expected.q));
}

#[test]
fn bounds_for_matchoid_and_caps() {
    let out = shortlist(&["bounds", "--algorithm", "matchoid", "--p", "2", "--epsilon", "0"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let bound = json["bound"].as_f64().unwrap();
    assert!((bound - (1.0 - (-3.0f64).exp()) / 3.0).abs() < 1e-15);

    let out = shortlist(&["bounds", "--algorithm", "matroid", "--k", "10", "--epsilon", "0.1", "--beta", "2"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let cap = json["caps"]["matroid"].as_f64().unwrap();
    assert!((cap - 80.0 * 20f64.ln()).abs() < 1e-9);
    assert!(json["report"]["recursion"].as_f64().unwrap() <= 0.5);
}

#[test]
fn hardness_gen_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hard.json");
    let p = path.to_str().unwrap();
    let out = shortlist(&["hardness-gen", "--n", "12", "--k", "2", "--l-star", "2", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"l_star\": 2") && text.contains("c^2"));

    let out = shortlist(&["validate", "--instance", p]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["check"]["ok"], true);
    assert_eq!(json["n"], 12);

    let bad = dir.path().join("published.json");
    shortlist(&["hardness-gen", "--n", "8", "--k", "2", "--l-star", "1", "--rule", "published", "--out", bad.to_str().unwrap()]);
    let out = shortlist(&["validate", "--instance", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["check"]["ok"], false);
    assert!(json["check"]["witness"].is_object());
}

#[test]
fn validate_reports_constraints() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let cons = dir.path().join("cons.json");
    std::fs::write(&inst, r#"{"kind": "modular", "n": 4, "weights": [1, 2, 3, 4]}"#).unwrap();
    std::fs::write(
        &cons,
        r#"{"matroids": [{"kind": "uniform", "k": 1, "ground": [0, 1, 2]}, {"kind": "uniform", "k": 1, "ground": [2, 3]}], "p": 2}"#,
    )
    .unwrap();
    let out = shortlist(&["validate", "--instance", inst.to_str().unwrap(), "--constraint", cons.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["constraint"]["kind"], "matchoid");
    assert_eq!(json["constraint"]["p"], 2);
    assert_eq!(json["constraint"]["rank"], 2);
}

#[test]
fn run_with_instance_and_constraint_files() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let cons = dir.path().join("cons.json");
    let out_path = dir.path().join("out.json");
    std::fs::write(&inst, r#"{"kind": "coverage", "n": 6, "sets": [[0], [0, 1], [2], [3, 4], [4], [5, 0]]}"#).unwrap();
    std::fs::write(&cons, r#"{"kind": "partition", "parts": [0, 0, 1, 1, 2, 2], "caps": {"0": 1, "1": 1, "2": 1}}"#).unwrap();
    let args = [
        "run",
        "--algorithm",
        "matroid",
        "--function",
        &format!("file:{}", inst.display()),
        "--constraint",
        &format!("file:{}", cons.display()),
        "--trials",
        "4",
        "--format",
        "json",
        "--out",
        out_path.to_str().unwrap(),
    ];
    let out = shortlist(&args.iter().map(|s| s.as_ref()).collect::<Vec<&str>>());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let trials = json["trials"].as_array().unwrap();
    assert_eq!(trials.len(), 4);
    for t in trials {
        assert_eq!(t["exact_value"], 5.0);
        assert!(t["alg_value"].as_f64().unwrap() <= 5.0);
    }
}
