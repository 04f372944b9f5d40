//! Reproducibility and layout of experiment output.

use std::process::Command;

use shortlist_bench::{run_experiment, to_csv, Algorithm, ExperimentConfig, COLUMNS};

/// Mean exact ratio of the cardinality run on the micro-suite below, from
/// the reference run.
const GOLDEN_MICRO_MEAN_RATIO: f64 = 0.7275391275391274;
const GOLDEN_TOLERANCE: f64 = 1e-12;

fn micro_suite() -> ExperimentConfig {
    ExperimentConfig {
        n: 14,
        k: 4,
        epsilon: 0.8,
        alpha: Some(1),
        beta: Some(2),
        function: "coverage:20:4".parse().unwrap(),
        trials: 25,
        seed: 2024,
        ..Default::default()
    }
}

/// CSV with the timing column removed.
fn without_ms(csv: &str) -> String {
    csv.lines()
        .map(|line| line.rsplit_once(',').unwrap().0)
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn golden_micro_suite_ratio() {
    let table = run_experiment(&micro_suite()).unwrap();
    let mean = table.summary_row("mean").unwrap().ratio_exact.unwrap();
    println!("micro-suite mean ratio_exact = {mean:.17}");
    assert!((mean - GOLDEN_MICRO_MEAN_RATIO).abs() <= GOLDEN_TOLERANCE, "{mean}");
    for t in &table.trials {
        let r = t.ratio_exact.unwrap();
        assert!(r > 0.0 && r <= 1.0, "trial {}: {r}", t.trial);
        assert!(t.shortlist_size as f64 <= t.cap);
    }
}

#[test]
fn identical_config_gives_identical_csv() {
    for algorithm in [Algorithm::Cardinality, Algorithm::Matroid, Algorithm::Matchoid] {
        let cfg = ExperimentConfig {
            algorithm,
            constraint: match algorithm {
                Algorithm::Cardinality => "uniform",
                Algorithm::Matroid => "partition:3:2",
                Algorithm::Matchoid => "matchoid:5:1",
            }
            .parse()
            .unwrap(),
            ..micro_suite()
        };
        let a = to_csv(&run_experiment(&cfg).unwrap()).unwrap();
        let b = to_csv(&run_experiment(&cfg).unwrap()).unwrap();
        assert_eq!(without_ms(&a), without_ms(&b), "{algorithm:?}");
    }
}

#[test]
fn single_trial_is_a_prefix_of_many() {
    let one = run_experiment(&ExperimentConfig { trials: 1, ..micro_suite() }).unwrap();
    let many = run_experiment(&micro_suite()).unwrap();
    let strip = |t: &shortlist_bench::TrialMetrics| shortlist_bench::TrialMetrics { ms: 0.0, ..t.clone() };
    assert_eq!(strip(&one.trials[0]), strip(&many.trials[0]));
}

#[test]
fn csv_rows_are_trials_plus_summary() {
    for trials in [1, 3, 8] {
        let table = run_experiment(&ExperimentConfig { trials, ..micro_suite() }).unwrap();
        let csv = to_csv(&table).unwrap();
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), COLUMNS);
        let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), trials + 4);
        let labels: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
        let expected: Vec<String> = (0..trials)
            .map(|t| t.to_string())
            .chain(["mean", "stddev", "min", "max"].map(String::from))
            .collect();
        assert_eq!(labels, expected);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_shortlist"))
            .args(["run", "--n", "40", "--k", "12", "--epsilon", "0.5", "--trials", "6", "--seed", "9"])
            .env("SHORTLIST_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        without_ms(&String::from_utf8(out.stdout).unwrap())
    };
    assert_eq!(run("1"), run("4"));
    let bad = Command::new(env!("CARGO_BIN_EXE_shortlist"))
        .args(["run", "--trials", "1"])
        .env("SHORTLIST_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, micro_suite().to_json()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_shortlist"))
        .args(["run", "--config", path.to_str().unwrap(), "--trials", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let direct = to_csv(&run_experiment(&ExperimentConfig { trials: 2, ..micro_suite() }).unwrap()).unwrap();
    assert_eq!(without_ms(&String::from_utf8(out.stdout).unwrap()), without_ms(&direct));
}
