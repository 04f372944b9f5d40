//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use shortlist::instance::{ConstraintFile, InstanceFile};
use shortlist::oracle::{check_monotone_submodular, HardnessInstance, HardnessParams, HardnessRule, CHECK_LIMIT};
use shortlist::{bound_cardinality, bound_matchoid, bound_matroid, shortlist_caps, Oracle64};

use crate::config::{Algorithm, ExperimentConfig, Format};
use crate::error::{BenchError, Result};
use crate::experiment::run_experiment;
use crate::output::write_output;

#[derive(Debug, Parser)]
#[command(name = "shortlist", version, about = "Shortlist algorithms for submodular maximization on random-order streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment and write one row per trial plus summary rows.
    Run(RunArgs),
    /// Print the closed-form guarantees for given parameters.
    Bounds(BoundsArgs),
    /// Check an instance file, and optionally a constraint file.
    Validate(ValidateArgs),
    /// Write a hardness instance file.
    HardnessGen(HardnessGenArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    alpha: Option<usize>,
    #[arg(long)]
    beta: Option<usize>,
    #[arg(long, value_enum)]
    algorithm: Option<Algorithm>,
    /// modular, coverage[:U[:S]], hardness[:published] or file:PATH.
    #[arg(long)]
    function: Option<String>,
    /// uniform, partition:P:C, matchoid:Q:C or file:PATH.
    #[arg(long)]
    constraint: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    #[arg(long)]
    k: Option<usize>,
    /// Defaults to ⌈1/ε⌉ when --epsilon is given.
    #[arg(long)]
    beta: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Window width for the cardinality shortlist cap.
    #[arg(long)]
    alpha: Option<usize>,
    /// Matroids per item, for matchoid bounds.
    #[arg(long)]
    p: Option<usize>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    constraint: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Repaired,
    Published,
}

#[derive(Debug, Args)]
struct HardnessGenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Block holding the special item, 1-based; drawn from --seed if absent.
    #[arg(long)]
    l_star: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "repaired")]
    rule: RuleArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code: 0 on success, 2 on usage errors, 1 otherwise.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run(args) => run(args),
        Command::Bounds(args) => bounds(args),
        Command::Validate(args) => validate(args),
        Command::HardnessGen(args) => hardness_gen(args),
    }
}

fn resolve(args: RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    macro_rules! take {
        ($($field:ident),*) => {$(if let Some(v) = args.$field { cfg.$field = v; })*};
    }
    take!(n, k, epsilon, algorithm, trials, seed, format);
    if args.alpha.is_some() {
        cfg.alpha = args.alpha;
    }
    if args.beta.is_some() {
        cfg.beta = args.beta;
    }
    if args.out.is_some() {
        cfg.out = args.out;
    }
    if let Some(f) = args.function {
        cfg.function = f.parse()?;
    }
    if let Some(c) = args.constraint {
        cfg.constraint = c.parse()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<()> {
    let cfg = resolve(args)?;
    let table = run_experiment(&cfg)?;
    write_output(&table, cfg.out.as_deref(), cfg.format)
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json value serializes"));
}

fn bounds(args: BoundsArgs) -> Result<()> {
    if args.algorithm == Algorithm::Matchoid {
        let p = args.p.ok_or_else(|| BenchError::usage("matchoid bounds need --p"))?;
        let eps = args.epsilon.ok_or_else(|| BenchError::usage("matchoid bounds need --epsilon"))?;
        if p == 0 {
            return Err(BenchError::usage("--p must be at least 1"));
        }
        if !(0.0..=1.0).contains(&eps) {
            return Err(BenchError::usage(format!("epsilon must lie in [0, 1], got {eps}")));
        }
        print_json(&json!({"algorithm": "matchoid", "p": p, "epsilon": eps, "bound": bound_matchoid(p, eps)}));
        return Ok(());
    }
    if let Some(eps) = args.epsilon {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(BenchError::usage(format!("epsilon must lie in (0, 1], got {eps}")));
        }
    }
    let k = args.k.ok_or_else(|| BenchError::usage("--k is required"))?;
    let beta = match (args.beta, args.epsilon) {
        (Some(b), _) => b,
        (None, Some(eps)) => (1.0 / eps - 1e-9).ceil() as usize,
        (None, None) => return Err(BenchError::usage("give --beta or --epsilon")),
    };
    if k == 0 || beta == 0 {
        return Err(BenchError::usage("--k and --beta must be positive"));
    }
    let (name, report) = match args.algorithm {
        Algorithm::Cardinality => ("cardinality", bound_cardinality(k, beta)),
        _ => ("matroid", bound_matroid(k, beta)),
    };
    let mut out = json!({"algorithm": name, "k": k, "beta": beta, "report": report});
    if let Some(eps) = args.epsilon {
        let alpha = args.alpha.unwrap_or(k);
        let caps = shortlist_caps(k, alpha, beta, eps);
        out["caps"] = json!({"alpha": alpha, "epsilon": eps, "cardinality": caps.cardinality, "matroid": caps.matroid});
    }
    print_json(&out);
    Ok(())
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))
}

fn validate(args: ValidateArgs) -> Result<()> {
    let file = InstanceFile::from_json(&read(&args.instance)?)?;
    let f: Oracle64 = file.build()?;
    let n = f.ground_size();
    let check = if n <= CHECK_LIMIT {
        Some(check_monotone_submodular(&f)?)
    } else {
        eprintln!("note: n = {n} exceeds {CHECK_LIMIT}; skipping the exhaustive check");
        None
    };
    let constraint = match &args.constraint {
        Some(path) => {
            let system = ConstraintFile::from_json(&read(path)?)?.build(n)?;
            let mut summary = json!({"kind": system.kind(), "rank": system.rank()});
            if let shortlist::Constraint::Matchoid(spec) = &system {
                summary["p"] = json!(spec.p());
                summary["q"] = json!(spec.q());
            }
            Some(summary)
        }
        None => None,
    };
    print_json(&json!({
        "n": n,
        "function": f.function().kind(),
        "check": check,
        "constraint": constraint,
    }));
    match check {
        Some(report) if !report.ok => Err(BenchError::Output(format!(
            "{} is not monotone submodular",
            args.instance.display()
        ))),
        _ => Ok(()),
    }
}

fn hardness_gen(args: HardnessGenArgs) -> Result<()> {
    let l_star = match args.l_star {
        Some(l) => l,
        None => {
            use rand::Rng;
            let blocks = HardnessParams::new(args.n, args.k, 1)?.blocks();
            ChaCha8Rng::seed_from_u64(args.seed).gen_range(1..=blocks)
        }
    };
    let rule = match args.rule {
        RuleArg::Repaired => HardnessRule::Repaired,
        RuleArg::Published => HardnessRule::Published,
    };
    let instance = HardnessInstance::new(HardnessParams::new(args.n, args.k, l_star)?, rule);
    let text = InstanceFile::hardness(&instance).to_json() + "\n";
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| BenchError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_defaults() {
        let cli = Cli::try_parse_from(["shortlist", "run", "--k", "7", "--function", "modular", "--trials", "3"]).unwrap();
        let Command::Run(args) = cli.command else { panic!("expected run") };
        let cfg = resolve(args).unwrap();
        assert_eq!((cfg.k, cfg.trials), (7, 3));
        assert_eq!(cfg.function.to_string(), "modular");
        assert_eq!(cfg.n, ExperimentConfig::default().n);
    }

    #[test]
    fn bad_sources_are_usage_errors() {
        let cli = Cli::try_parse_from(["shortlist", "run", "--constraint", "grid:3"]).unwrap();
        let Command::Run(args) = cli.command else { panic!("expected run") };
        assert_eq!(resolve(args).unwrap_err().exit_code(), 2);
    }
}
