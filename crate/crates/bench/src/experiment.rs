//! Trial execution and aggregation.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use shortlist::baselines::EXACT_LIMIT;
use shortlist::stream::{make_schedule, permute_stream};
use shortlist::{
    cardinality_secretary_run, exact_opt, greedy_cardinality, greedy_independence, matchoid_secretary_run,
    matroid_secretary_run, shortlist_caps, AlgParams, Constraint, Oracle64, RunOptions, RunResult64,
};

use crate::config::{Algorithm, ExperimentConfig};
use crate::error::{BenchError, Result};
use crate::generate::Fixed;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SHORTLIST_THREADS";

/// One CSV row. Column order is the output schema.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialMetrics {
    pub trial: usize,
    pub alg_value: f64,
    pub greedy_value: f64,
    /// Present when the ground set is small enough to enumerate.
    pub exact_value: Option<f64>,
    pub ratio_greedy: f64,
    pub ratio_exact: Option<f64>,
    pub shortlist_size: usize,
    /// Worst-case shortlist size for the run's parameters.
    pub cap: f64,
    pub value_queries: u64,
    pub indep_queries: u64,
    pub buffer_hwm: usize,
    /// Wall time of the online run alone.
    pub ms: f64,
}

/// A `mean`, `stddev`, `min` or `max` row over the trial rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub trial: String,
    pub alg_value: f64,
    pub greedy_value: f64,
    pub exact_value: Option<f64>,
    pub ratio_greedy: f64,
    pub ratio_exact: Option<f64>,
    pub shortlist_size: f64,
    pub cap: f64,
    pub value_queries: f64,
    pub indep_queries: f64,
    pub buffer_hwm: f64,
    pub ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentTable {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialMetrics>,
    pub summary: Vec<SummaryRow>,
}

impl ExperimentTable {
    pub fn summary_row(&self, name: &str) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.trial == name)
    }
}

/// Generator for trial `trial`: the master seed picks the ChaCha key and
/// the trial index picks the stream, so trials are order-independent.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn ratio(value: f64, reference: f64) -> f64 {
    if reference > 0.0 {
        value / reference
    } else {
        1.0
    }
}

/// One trial. Core failures are tagged with the trial index.
pub fn run_trial(cfg: &ExperimentConfig, fixed: &Fixed, trial: usize) -> Result<TrialMetrics> {
    let inner = || -> Result<TrialMetrics> {
        let mut rng = trial_rng(cfg.seed, trial);
        let f = fixed.function(cfg, &mut rng)?;
        let system = fixed.constraint(cfg, &mut rng)?;
        let n = f.ground_size();
        let params = match cfg.algorithm {
            Algorithm::Cardinality => AlgParams::cardinality(cfg.k, cfg.epsilon, cfg.alpha, cfg.beta)?,
            _ => AlgParams::swap(system.rank().max(1), cfg.epsilon, cfg.beta)?,
        };
        let schedule = make_schedule(n, params.k, params.beta, &mut rng)?.group_windows(params.alpha)?;
        let arrivals = permute_stream(&schedule, &mut rng);

        let started = Instant::now();
        let run = online_run(&f, &system, &params, &arrivals, &schedule, &mut rng)?;
        let ms = started.elapsed().as_secs_f64() * 1e3;

        let greedy_set = match system {
            Constraint::Cardinality { k } => greedy_cardinality(&f, k)?,
            ref other => greedy_independence(&f, other)?,
        };
        let greedy_value = f.peek(&greedy_set)?;
        let exact_value = if n <= EXACT_LIMIT {
            Some(exact_opt(&f, &system)?.1)
        } else {
            None
        };
        let caps = shortlist_caps(params.k, params.alpha, params.beta, params.eps);
        Ok(TrialMetrics {
            trial,
            alg_value: run.value,
            greedy_value,
            exact_value,
            ratio_greedy: ratio(run.value, greedy_value),
            ratio_exact: exact_value.map(|opt| ratio(run.value, opt)),
            shortlist_size: run.shortlist.len(),
            cap: match cfg.algorithm {
                Algorithm::Cardinality => caps.cardinality,
                _ => caps.matroid,
            },
            value_queries: run.counters.value_queries,
            indep_queries: run.counters.indep_queries,
            buffer_hwm: run.counters.buffer_hwm,
            ms,
        })
    };
    inner().map_err(|e| match e {
        BenchError::Core(source) => BenchError::Trial { trial, source },
        other => other,
    })
}

fn online_run(
    f: &Oracle64,
    system: &Constraint,
    params: &AlgParams,
    arrivals: &shortlist::Configuration,
    schedule: &shortlist::Schedule,
    rng: &mut ChaCha8Rng,
) -> shortlist::Result<RunResult64> {
    let opts = RunOptions::default();
    match system {
        Constraint::Cardinality { .. } => cardinality_secretary_run(f, params, arrivals, schedule, rng, opts),
        Constraint::Matroid(m) => matroid_secretary_run(f, m, params, arrivals, schedule, rng, opts),
        Constraint::Matchoid(spec) => matchoid_secretary_run(f, spec, params, arrivals, schedule, rng, opts),
    }
}

/// Runs every trial, in parallel when possible, and aggregates.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentTable> {
    cfg.validate()?;
    let fixed = Fixed::load(cfg)?;
    let work = || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, &fixed, t))
            .collect::<Result<Vec<_>>>()
    };
    let trials = match thread_cap()? {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| BenchError::usage(format!("{THREADS_ENV}: {e}")))?
            .install(work)?,
        None => work()?,
    };
    Ok(ExperimentTable {
        config: cfg.clone(),
        summary: summarize(&trials),
        trials,
    })
}

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(BenchError::usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

struct Stats {
    mean: f64,
    stddev: f64,
    min: f64,
    max: f64,
}

/// Sample statistics; the deviation is 0 for a single value.
fn stats(values: &[f64]) -> Option<Stats> {
    if values.is_empty() {
        return None;
    }
    let len = values.len() as f64;
    let mean = values.iter().sum::<f64>() / len;
    let stddev = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (len - 1.0)).sqrt()
    } else {
        0.0
    };
    Some(Stats {
        mean,
        stddev,
        min: values.iter().cloned().fold(f64::INFINITY, f64::min),
        max: values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    })
}

pub fn summarize(trials: &[TrialMetrics]) -> Vec<SummaryRow> {
    let column = |get: &dyn Fn(&TrialMetrics) -> Option<f64>| -> Option<Stats> {
        stats(&trials.iter().filter_map(get).collect::<Vec<_>>())
    };
    let alg = column(&|t| Some(t.alg_value));
    let greedy = column(&|t| Some(t.greedy_value));
    let exact = column(&|t| t.exact_value);
    let ratio_greedy = column(&|t| Some(t.ratio_greedy));
    let ratio_exact = column(&|t| t.ratio_exact);
    let shortlist = column(&|t| Some(t.shortlist_size as f64));
    let cap = column(&|t| Some(t.cap));
    let value_queries = column(&|t| Some(t.value_queries as f64));
    let indep_queries = column(&|t| Some(t.indep_queries as f64));
    let hwm = column(&|t| Some(t.buffer_hwm as f64));
    let ms = column(&|t| Some(t.ms));
    if alg.is_none() {
        return Vec::new();
    }
    type Pick = fn(&Stats) -> f64;
    let pick: [(&str, Pick); 4] = [
        ("mean", |s| s.mean),
        ("stddev", |s| s.stddev),
        ("min", |s| s.min),
        ("max", |s| s.max),
    ];
    let req = |s: &Option<Stats>, g: Pick| g(s.as_ref().expect("every trial has the column"));
    pick.iter()
        .map(|&(name, g)| SummaryRow {
            trial: name.to_string(),
            alg_value: req(&alg, g),
            greedy_value: req(&greedy, g),
            exact_value: exact.as_ref().map(g),
            ratio_greedy: req(&ratio_greedy, g),
            ratio_exact: ratio_exact.as_ref().map(g),
            shortlist_size: req(&shortlist, g),
            cap: req(&cap, g),
            value_queries: req(&value_queries, g),
            indep_queries: req(&indep_queries, g),
            buffer_hwm: req(&hwm, g),
            ms: req(&ms, g),
        })
        .collect()
}
