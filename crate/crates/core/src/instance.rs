//! JSON formats for instances and constraints.
//!
//! ```json
//! {"kind": "modular", "n": 3, "weights": [1.0, 2.0, 3.0]}
//! {"kind": "coverage", "n": 2, "sets": [[0, 1], [1, 2]]}
//! {"kind": "hardness", "n": 8, "hardness": {"k": 2, "l_star": 1}}
//!
//! {"kind": "uniform", "k": 3}
//! {"kind": "partition", "parts": [0, 0, 1], "caps": {"0": 1, "1": 1}}
//! {"matroids": [{"kind": "uniform", "k": 1, "ground": [0, 1]}, ...], "p": 2}
//! ```
//!
//! Partition parts inside a matchoid member are given per position of the
//! member's `ground` list.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::independence::{Constraint, MatchoidMember, MatchoidSpec, MatroidOracle};
use crate::oracle::{HardnessInstance, HardnessParams, HardnessRule, ValueOracle};
use crate::scalar::Scalar;
use crate::set::{ItemId, ItemSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardnessSpec {
    pub k: usize,
    pub l_star: usize,
    #[serde(default)]
    pub rule: HardnessRule,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceFile {
    Modular {
        n: usize,
        weights: Vec<f64>,
    },
    Coverage {
        n: usize,
        sets: Vec<Vec<u32>>,
    },
    Hardness {
        n: usize,
        hardness: HardnessSpec,
        /// Item names by id, emitted for reference and checked on load.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        layout: Option<Vec<String>>,
    },
}

impl InstanceFile {
    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// Hardness file with its layout table filled in.
    pub fn hardness(instance: &HardnessInstance) -> Self {
        let p = instance.params();
        InstanceFile::Hardness {
            n: p.n,
            hardness: HardnessSpec {
                k: p.k,
                l_star: p.l_star,
                rule: instance.rule(),
            },
            layout: Some(instance.layout().iter().map(|x| x.name()).collect()),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            InstanceFile::Modular { n, .. }
            | InstanceFile::Coverage { n, .. }
            | InstanceFile::Hardness { n, .. } => *n,
        }
    }

    pub fn build<V: Scalar>(&self) -> Result<ValueOracle<V>> {
        let n = self.n();
        let mismatch = |len: usize| {
            Error::Parse(format!("instance declares n = {n} but lists {len} items"))
        };
        match self {
            InstanceFile::Modular { weights, .. } => {
                if weights.len() != n {
                    return Err(mismatch(weights.len()));
                }
                let weights = weights
                    .iter()
                    .map(|&w| {
                        V::from_f64(w).ok_or_else(|| Error::Parse(format!("weight {w} not representable")))
                    })
                    .collect::<Result<Vec<V>>>()?;
                ValueOracle::modular(weights)
            }
            InstanceFile::Coverage { sets, .. } => {
                if sets.len() != n {
                    return Err(mismatch(sets.len()));
                }
                Ok(ValueOracle::coverage(sets.clone()))
            }
            InstanceFile::Hardness { hardness, layout, .. } => {
                let params = HardnessParams::new(n, hardness.k, hardness.l_star)?;
                let instance = HardnessInstance::new(params, hardness.rule);
                if let Some(names) = layout {
                    let expected: Vec<String> = instance.layout().iter().map(|x| x.name()).collect();
                    if *names != expected {
                        return Err(Error::Parse("hardness layout table does not match (n, k, l_star)".into()));
                    }
                }
                Ok(ValueOracle::hardness(instance))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatroidFile {
    Uniform {
        k: usize,
    },
    Partition {
        parts: Vec<usize>,
        /// Cap per part id. Keys are part ids written as strings.
        caps: BTreeMap<String, usize>,
    },
}

impl MatroidFile {
    /// Dense caps plus the part index of every listed part id.
    fn dense_parts(parts: &[usize], caps: &BTreeMap<String, usize>) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut ids = Vec::with_capacity(caps.len());
        for (key, &cap) in caps {
            let id: usize = key
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("part id {key:?} is not a non-negative integer")))?;
            ids.push((id, cap));
        }
        let index: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &(p, _))| (p, i)).collect();
        if index.len() != ids.len() {
            return Err(Error::Parse("duplicate part id in caps".into()));
        }
        let dense = parts
            .iter()
            .map(|p| {
                index
                    .get(p)
                    .copied()
                    .ok_or_else(|| Error::Parse(format!("part {p} has no cap")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((dense, ids.into_iter().map(|(_, c)| c).collect()))
    }

    /// Matroid over all of `[0, n)`.
    pub fn build(&self, n: usize) -> Result<MatroidOracle> {
        match self {
            MatroidFile::Uniform { k } => Ok(MatroidOracle::uniform(n, *k)),
            MatroidFile::Partition { parts, caps } => {
                if parts.len() != n {
                    return Err(Error::Parse(format!(
                        "partition lists {} items, instance has {n}",
                        parts.len()
                    )));
                }
                let (dense, caps) = Self::dense_parts(parts, caps)?;
                MatroidOracle::partition(dense, caps)
            }
        }
    }

    /// Matroid over the items of `ground` only.
    pub fn build_on(&self, n: usize, ground: &ItemSet) -> Result<MatroidOracle> {
        match self {
            MatroidFile::Uniform { k } => Ok(MatroidOracle::uniform(n, *k)),
            MatroidFile::Partition { parts, caps } => {
                let (dense, caps) = Self::dense_parts(parts, caps)?;
                MatroidOracle::partition_on(n, ground, &dense, caps)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberFile {
    #[serde(flatten)]
    pub matroid: MatroidFile,
    pub ground: Vec<ItemId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchoidFile {
    pub matroids: Vec<MemberFile>,
    pub p: usize,
    /// Largest feasible set size; derived greedily when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstraintFile {
    Matchoid(MatchoidFile),
    Matroid(MatroidFile),
}

impl ConstraintFile {
    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("constraint serializes")
    }

    pub fn build(&self, n: usize) -> Result<Constraint> {
        match self {
            ConstraintFile::Matroid(m) => Ok(Constraint::Matroid(m.build(n)?)),
            ConstraintFile::Matchoid(spec) => {
                let mut members = Vec::with_capacity(spec.matroids.len());
                for m in &spec.matroids {
                    // keep the listed order so partition parts line up
                    let mut pairs: Vec<(ItemId, usize)> = m.ground.iter().copied().zip(0..).collect();
                    pairs.sort_unstable();
                    if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
                        return Err(Error::Parse("duplicate item in a matroid ground list".into()));
                    }
                    let ground: ItemSet = pairs.iter().map(|&(x, _)| x).collect();
                    let matroid = match &m.matroid {
                        MatroidFile::Partition { parts, caps } => {
                            if parts.len() != m.ground.len() {
                                return Err(Error::Parse(format!(
                                    "member lists {} parts for {} ground items",
                                    parts.len(),
                                    m.ground.len()
                                )));
                            }
                            let sorted_parts: Vec<usize> = pairs.iter().map(|&(_, i)| parts[i]).collect();
                            MatroidFile::Partition {
                                parts: sorted_parts,
                                caps: caps.clone(),
                            }
                            .build_on(n, &ground)?
                        }
                        uniform => uniform.build_on(n, &ground)?,
                    };
                    members.push(MatchoidMember { matroid, ground });
                }
                Ok(Constraint::Matchoid(MatchoidSpec::new(n, members, spec.p, spec.k)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::independence::IndependenceOracle;
    use crate::oracle::hardness_instance;

    #[test]
    fn instance_kinds_round_trip() {
        for json in [
            r#"{"kind":"modular","n":3,"weights":[1.0,2.0,3.0]}"#,
            r#"{"kind":"coverage","n":2,"sets":[[0,1],[1,2]]}"#,
            r#"{"kind":"hardness","n":8,"hardness":{"k":2,"l_star":1}}"#,
        ] {
            let file = InstanceFile::from_json(json).unwrap();
            assert_eq!(InstanceFile::from_json(&file.to_json()).unwrap(), file);
        }
    }

    #[test]
    fn builds_oracles() {
        let f: ValueOracle<f64> = InstanceFile::from_json(r#"{"kind":"coverage","n":2,"sets":[[0,1],[1,2]]}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(f.evaluate(&ItemSet::from([0, 1])).unwrap(), 3.0);
        let h: ValueOracle<f64> = InstanceFile::from_json(r#"{"kind":"hardness","n":8,"hardness":{"k":2,"l_star":2}}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(h.ground_size(), 8);
    }

    #[test]
    fn mismatched_counts_rejected() {
        let bad = InstanceFile::from_json(r#"{"kind":"modular","n":4,"weights":[1.0]}"#).unwrap();
        assert!(bad.build::<f64>().is_err());
        assert!(InstanceFile::from_json(r#"{"kind":"cubic","n":1}"#).is_err());
    }

    #[test]
    fn hardness_file_carries_layout() {
        let inst = hardness_instance(8, 2, 2).unwrap();
        let file = InstanceFile::hardness(&inst);
        let json = file.to_json();
        assert!(json.contains("c^2"));
        let back = InstanceFile::from_json(&json).unwrap();
        assert!(back.build::<f64>().is_ok());
        let tampered = json.replace("c^2", "c^1");
        assert!(InstanceFile::from_json(&tampered).unwrap().build::<f64>().is_err());
    }

    #[test]
    fn matroid_files() {
        let c = ConstraintFile::from_json(r#"{"kind":"uniform","k":2}"#).unwrap().build(5).unwrap();
        assert_eq!(c.rank(), 2);
        let c = ConstraintFile::from_json(r#"{"kind":"partition","parts":[7,7,3],"caps":{"7":1,"3":1}}"#)
            .unwrap()
            .build(3)
            .unwrap();
        assert!(c.admits(&ItemSet::from([0, 2])));
        assert!(!c.admits(&ItemSet::from([0, 1])));
        assert!(ConstraintFile::from_json(r#"{"kind":"partition","parts":[0,1],"caps":{"0":1}}"#)
            .unwrap()
            .build(2)
            .is_err());
    }

    #[test]
    fn matchoid_file_with_positional_parts() {
        let json = r#"{
            "matroids": [
                {"kind": "partition", "ground": [2, 0, 1], "parts": [0, 0, 1], "caps": {"0": 1, "1": 1}},
                {"kind": "uniform", "k": 1, "ground": [2, 3]}
            ],
            "p": 2
        }"#;
        let c = ConstraintFile::from_json(json).unwrap().build(4).unwrap();
        let Constraint::Matchoid(spec) = &c else {
            panic!("expected a matchoid");
        };
        assert_eq!(spec.q(), 2);
        assert_eq!(spec.membership_list(2).unwrap(), &[0, 1]);
        // 2 and 0 share a part
        assert!(!spec.admits(&ItemSet::from([0, 2])));
        assert!(spec.admits(&ItemSet::from([0, 1, 3])));
        assert!(!spec.admits(&ItemSet::from([2, 3])));
        let file = ConstraintFile::from_json(json).unwrap();
        assert_eq!(ConstraintFile::from_json(&file.to_json()).unwrap(), file);
    }
}
