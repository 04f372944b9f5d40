//! Experiment configuration: a JSON file whose fields flags may override.
//!
//! ```json
//! {"n": 200, "k": 20, "epsilon": 0.5, "algorithm": "cardinality",
//!  "function": "coverage:400:6", "constraint": "uniform",
//!  "trials": 10, "seed": 7, "format": "csv"}
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use shortlist::oracle::HardnessRule;

use crate::error::{BenchError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Cardinality,
    Matroid,
    Matchoid,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Where the set function of each trial comes from.
///
/// `modular`, `coverage[:U[:S]]` (universe `U`, default `n`, and up to `S`
/// elements per set, default 4),
/// `hardness[:published]`, or `file:PATH` for an instance JSON file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FunctionSource {
    Modular,
    Coverage { universe: Option<u32>, max_set: usize },
    Hardness { rule: HardnessRule },
    File(PathBuf),
}

/// The constraint of each trial.
///
/// `uniform` (rank `k`), `partition:P:C` (`P` random parts of capacity `C`),
/// `matchoid:Q:C` (items are edges between `Q` vertices, each vertex a
/// uniform matroid of rank `C`, so `p = 2`), or `file:PATH`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ConstraintSource {
    Uniform,
    Partition { parts: usize, cap: usize },
    Matchoid { vertices: usize, cap: usize },
    File(PathBuf),
}

fn number<T: FromStr>(field: &str, what: &str, spec: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| BenchError::usage(format!("bad {what} {field:?} in {spec:?}")))
}

/// Universe size; 0 means "same as n".
fn universe(field: &str, spec: &str) -> Result<Option<u32>> {
    let u: u32 = number(field, "universe", spec)?;
    Ok((u > 0).then_some(u))
}

impl FromStr for FunctionSource {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(FunctionSource::File(PathBuf::from(path)));
        }
        let fields: Vec<&str> = s.split(':').collect();
        match fields.as_slice() {
            ["modular"] => Ok(FunctionSource::Modular),
            ["coverage"] => Ok(FunctionSource::Coverage {
                universe: None,
                max_set: 4,
            }),
            ["coverage", u] => Ok(FunctionSource::Coverage {
                universe: universe(u, s)?,
                max_set: 4,
            }),
            ["coverage", u, m] => Ok(FunctionSource::Coverage {
                universe: universe(u, s)?,
                max_set: number(m, "set size", s)?,
            }),
            ["hardness"] => Ok(FunctionSource::Hardness {
                rule: HardnessRule::Repaired,
            }),
            ["hardness", "repaired"] => Ok(FunctionSource::Hardness {
                rule: HardnessRule::Repaired,
            }),
            ["hardness", "published"] => Ok(FunctionSource::Hardness {
                rule: HardnessRule::Published,
            }),
            _ => Err(BenchError::usage(format!(
                "unknown function {s:?}; expected modular, coverage[:U[:S]], hardness[:published] or file:PATH"
            ))),
        }
    }
}

impl fmt::Display for FunctionSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSource::Modular => write!(f, "modular"),
            FunctionSource::Coverage { universe: None, max_set } if *max_set == 4 => write!(f, "coverage"),
            FunctionSource::Coverage { universe, max_set } => {
                write!(f, "coverage:{}:{max_set}", universe.map_or("0".into(), |u| u.to_string()))
            }
            FunctionSource::Hardness { rule: HardnessRule::Repaired } => write!(f, "hardness"),
            FunctionSource::Hardness { rule: HardnessRule::Published } => write!(f, "hardness:published"),
            FunctionSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl TryFrom<String> for FunctionSource {
    type Error = BenchError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FunctionSource> for String {
    fn from(s: FunctionSource) -> String {
        s.to_string()
    }
}

impl FromStr for ConstraintSource {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(ConstraintSource::File(PathBuf::from(path)));
        }
        let fields: Vec<&str> = s.split(':').collect();
        match fields.as_slice() {
            ["uniform"] => Ok(ConstraintSource::Uniform),
            ["partition", p, c] => Ok(ConstraintSource::Partition {
                parts: number(p, "part count", s)?,
                cap: number(c, "capacity", s)?,
            }),
            ["matchoid", q, c] => Ok(ConstraintSource::Matchoid {
                vertices: number(q, "vertex count", s)?,
                cap: number(c, "capacity", s)?,
            }),
            _ => Err(BenchError::usage(format!(
                "unknown constraint {s:?}; expected uniform, partition:P:C, matchoid:Q:C or file:PATH"
            ))),
        }
    }
}

impl fmt::Display for ConstraintSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintSource::Uniform => write!(f, "uniform"),
            ConstraintSource::Partition { parts, cap } => write!(f, "partition:{parts}:{cap}"),
            ConstraintSource::Matchoid { vertices, cap } => write!(f, "matchoid:{vertices}:{cap}"),
            ConstraintSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl TryFrom<String> for ConstraintSource {
    type Error = BenchError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ConstraintSource> for String {
    fn from(s: ConstraintSource) -> String {
        s.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Ground set size for generated functions; ignored for files.
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub alpha: Option<usize>,
    pub beta: Option<usize>,
    pub algorithm: Algorithm,
    pub function: FunctionSource,
    pub constraint: ConstraintSource,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 200,
            k: 20,
            epsilon: 0.5,
            alpha: None,
            beta: None,
            algorithm: Algorithm::Cardinality,
            function: FunctionSource::Coverage {
                universe: None,
                max_set: 4,
            },
            constraint: ConstraintSource::Uniform,
            trials: 10,
            seed: 0,
            out: None,
            format: Format::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| BenchError::usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::from_json(&text).map_err(|e| BenchError::usage(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Shape checks that need no instance: trial count, referenced files
    /// and the algorithm/constraint pairing.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(BenchError::usage("trials must be at least 1"));
        }
        if self.k == 0 {
            return Err(BenchError::usage("k must be at least 1"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(BenchError::usage(format!("epsilon must lie in (0, 1], got {}", self.epsilon)));
        }
        for path in [self.function_file(), self.constraint_file()].into_iter().flatten() {
            if !path.is_file() {
                return Err(BenchError::usage(format!("{} does not exist", path.display())));
            }
        }
        match (&self.function, self.n) {
            (FunctionSource::File(_), _) => {}
            (_, 0) => return Err(BenchError::usage("n must be at least 1")),
            _ => {}
        }
        if let FunctionSource::Coverage { max_set: 0, .. } = self.function {
            return Err(BenchError::usage("coverage set size must be at least 1"));
        }
        match (&self.algorithm, &self.constraint) {
            (Algorithm::Cardinality, ConstraintSource::Uniform) => Ok(()),
            (Algorithm::Cardinality, c) => Err(BenchError::usage(format!(
                "the cardinality algorithm takes the uniform constraint, got {c}"
            ))),
            (Algorithm::Matroid, ConstraintSource::Matchoid { .. }) => Err(BenchError::usage(
                "the matroid algorithm cannot run under a matchoid:Q:C constraint",
            )),
            (_, ConstraintSource::Partition { parts: 0, .. }) => {
                Err(BenchError::usage("partition needs at least one part"))
            }
            (_, ConstraintSource::Matchoid { vertices, .. }) if *vertices < 2 => {
                Err(BenchError::usage("matchoid needs at least two vertices"))
            }
            _ => Ok(()),
        }
    }

    fn function_file(&self) -> Option<&Path> {
        match &self.function {
            FunctionSource::File(p) => Some(p),
            _ => None,
        }
    }

    fn constraint_file(&self) -> Option<&Path> {
        match &self.constraint {
            ConstraintSource::File(p) => Some(p),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sources_round_trip() {
        for s in ["modular", "coverage", "coverage:50:3", "hardness", "hardness:published", "coverage:0:2", "file:a/b.json"] {
            assert_eq!(s.parse::<FunctionSource>().unwrap().to_string(), s);
        }
        for s in ["uniform", "partition:4:2", "matchoid:6:1", "file:c.json"] {
            assert_eq!(s.parse::<ConstraintSource>().unwrap().to_string(), s);
        }
        assert!("cover".parse::<FunctionSource>().is_err());
        assert!("partition:x:1".parse::<ConstraintSource>().is_err());
        assert!("partition:4".parse::<ConstraintSource>().is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = ExperimentConfig {
            function: "coverage:30:2".parse().unwrap(),
            constraint: "partition:3:1".parse().unwrap(),
            algorithm: Algorithm::Matroid,
            alpha: Some(2),
            ..Default::default()
        };
        assert_eq!(ExperimentConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        let partial = ExperimentConfig::from_json(r#"{"k": 5, "function": "modular"}"#).unwrap();
        assert_eq!((partial.k, partial.trials), (5, 10));
        assert!(ExperimentConfig::from_json(r#"{"kk": 5}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"function": "bogus"}"#).is_err());
    }

    #[test]
    fn validation_rejects_bad_shapes() {
        let ok = ExperimentConfig::default();
        assert!(ok.validate().is_ok());
        let bad = [
            ExperimentConfig { trials: 0, ..ok.clone() },
            ExperimentConfig { epsilon: 0.0, ..ok.clone() },
            ExperimentConfig {
                constraint: ConstraintSource::Partition { parts: 2, cap: 1 },
                ..ok.clone()
            },
            ExperimentConfig {
                algorithm: Algorithm::Matroid,
                constraint: ConstraintSource::Matchoid { vertices: 4, cap: 1 },
                ..ok.clone()
            },
            ExperimentConfig {
                function: FunctionSource::File("/nonexistent/instance.json".into()),
                ..ok.clone()
            },
        ];
        for cfg in bad {
            assert_eq!(cfg.validate().unwrap_err().exit_code(), 2, "{cfg:?}");
        }
    }
}
