//! Experiment harness for the shortlist algorithms: configuration, seeded
//! trial execution, aggregation, CSV/JSON output and the `shortlist` CLI.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod output;

pub use cli::cli_main;
pub use config::{Algorithm, ConstraintSource, ExperimentConfig, Format, FunctionSource};
pub use error::{BenchError, Result};
pub use experiment::{run_experiment, run_trial, ExperimentTable, SummaryRow, TrialMetrics};
pub use output::{render, to_csv, to_json, write_output, COLUMNS};
