//! Per-trial instance and constraint generators.

use rand::seq::SliceRandom;
use rand::Rng;
use shortlist::independence::{MatchoidMember, MatchoidSpec, MatroidOracle};
use shortlist::instance::{ConstraintFile, InstanceFile};
use shortlist::oracle::{HardnessInstance, HardnessParams, HardnessRule};
use shortlist::{Constraint, ItemSet, Oracle64, ValueOracle};

use crate::config::{Algorithm, ConstraintSource, ExperimentConfig, FunctionSource};
use crate::error::{BenchError, Result};

/// Weights drawn uniformly from `[0, 1)`.
pub fn random_modular<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Oracle64 {
    ValueOracle::modular((0..n).map(|_| rng.gen_range(0.0..1.0)).collect()).expect("weights are non-negative")
}

/// `n` sets of 1 to `max_set` elements drawn from `[0, universe)`.
pub fn random_coverage<R: Rng + ?Sized>(n: usize, universe: u32, max_set: usize, rng: &mut R) -> Oracle64 {
    let sets = (0..n)
        .map(|_| {
            let size = rng.gen_range(1..=max_set);
            (0..size).map(|_| rng.gen_range(0..universe.max(1))).collect()
        })
        .collect();
    ValueOracle::coverage(sets)
}

/// Hardness instance with its special block drawn uniformly.
pub fn random_hardness<R: Rng + ?Sized>(n: usize, k: usize, rule: HardnessRule, rng: &mut R) -> Result<Oracle64> {
    let blocks = HardnessParams::new(n, k, 1)?.blocks();
    let params = HardnessParams::new(n, k, rng.gen_range(1..=blocks))?;
    Ok(ValueOracle::hardness(HardnessInstance::new(params, rule)))
}

/// Partition matroid with every item in a uniformly drawn part.
pub fn random_partition<R: Rng + ?Sized>(n: usize, parts: usize, cap: usize, rng: &mut R) -> Result<MatroidOracle> {
    let part_of = (0..n).map(|_| rng.gen_range(0..parts)).collect();
    Ok(MatroidOracle::partition(part_of, vec![cap; parts])?)
}

/// Degree-constrained subgraph matchoid: item `x` is an edge between two of
/// `vertices` vertices and every vertex caps its incident edges at `cap`.
/// Edges are distinct while `n` allows, then repeat.
pub fn edge_matchoid<R: Rng + ?Sized>(n: usize, vertices: usize, cap: usize, rng: &mut R) -> Result<MatchoidSpec> {
    if vertices < 2 {
        return Err(BenchError::usage("matchoid needs at least two vertices"));
    }
    let mut pairs: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    let edges: Vec<(usize, usize)> = (0..n).map(|i| pairs[i % pairs.len()]).collect();
    let members = (0..vertices)
        .filter_map(|v| {
            let ground: ItemSet = (0..n).filter(|&e| edges[e].0 == v || edges[e].1 == v).collect();
            (!ground.is_empty()).then(|| MatchoidMember {
                matroid: MatroidOracle::uniform(n, cap),
                ground,
            })
        })
        .collect();
    Ok(MatchoidSpec::new(n, members, 2, None)?)
}

/// Inputs read once per experiment.
#[derive(Clone, Debug)]
pub struct Fixed {
    function: Option<Oracle64>,
    constraint: Option<ConstraintFile>,
}

impl Fixed {
    pub fn load(cfg: &ExperimentConfig) -> Result<Self> {
        let read = |path: &std::path::Path| std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e));
        let function = match &cfg.function {
            FunctionSource::File(path) => Some(InstanceFile::from_json(&read(path)?)?.build::<f64>()?),
            _ => None,
        };
        let constraint = match &cfg.constraint {
            ConstraintSource::File(path) => Some(ConstraintFile::from_json(&read(path)?)?),
            _ => None,
        };
        Ok(Fixed { function, constraint })
    }

    /// Ground set size of every trial.
    pub fn n(&self, cfg: &ExperimentConfig) -> usize {
        self.function.as_ref().map_or(cfg.n, |f| f.ground_size())
    }

    pub fn function<R: Rng + ?Sized>(&self, cfg: &ExperimentConfig, rng: &mut R) -> Result<Oracle64> {
        let n = self.n(cfg);
        match &cfg.function {
            FunctionSource::Modular => Ok(random_modular(n, rng)),
            FunctionSource::Coverage { universe, max_set } => {
                Ok(random_coverage(n, universe.unwrap_or(n as u32), *max_set, rng))
            }
            FunctionSource::Hardness { rule } => random_hardness(n, cfg.k, *rule, rng),
            FunctionSource::File(_) => Ok(self.function.clone().expect("loaded with the config")),
        }
    }

    pub fn constraint<R: Rng + ?Sized>(&self, cfg: &ExperimentConfig, rng: &mut R) -> Result<Constraint> {
        let n = self.n(cfg);
        let built = match &cfg.constraint {
            ConstraintSource::Uniform if cfg.algorithm == Algorithm::Cardinality => {
                return Ok(Constraint::Cardinality { k: cfg.k })
            }
            ConstraintSource::Uniform => Constraint::Matroid(MatroidOracle::uniform(n, cfg.k)),
            ConstraintSource::Partition { parts, cap } => Constraint::Matroid(random_partition(n, *parts, *cap, rng)?),
            ConstraintSource::Matchoid { vertices, cap } => Constraint::Matchoid(edge_matchoid(n, *vertices, *cap, rng)?),
            ConstraintSource::File(_) => self.constraint.as_ref().expect("loaded with the config").build(n)?,
        };
        match (cfg.algorithm, built) {
            (Algorithm::Matchoid, Constraint::Matroid(m)) => Ok(Constraint::Matchoid(MatchoidSpec::single(m)?)),
            (Algorithm::Matroid, Constraint::Matchoid(_)) => Err(BenchError::usage(
                "the matroid algorithm was given a matchoid constraint file",
            )),
            (_, c) => Ok(c),
        }
    }
}
