use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::set::ItemSet;

use super::SetFunction;

/// `f(S) = Σ_{x∈S} w_x` with non-negative weights.
#[derive(Clone, Debug)]
pub struct Modular<V> {
    weights: Vec<V>,
}

impl<V: Scalar> Modular<V> {
    pub fn new(weights: Vec<V>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::config("modular function needs at least one item"));
        }
        // also rejects NaN
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if let Some(i) = weights.iter().position(|w| !(*w >= V::zero())) {
            return Err(Error::config(format!(
                "weight of item {i} is negative; modular oracle must be monotone"
            )));
        }
        Ok(Modular { weights })
    }

    pub fn weights(&self) -> &[V] {
        &self.weights
    }
}

impl<V: Scalar> SetFunction<V> for Modular<V> {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: &ItemSet) -> V {
        set.iter()
            .fold(V::zero(), |acc, x| acc + self.weights[x].clone())
    }
}

/// `f(S) = |∪_{x∈S} C_x|` for cover sets `C_x` over a universe of element ids.
#[derive(Clone, Debug)]
pub struct Coverage {
    sets: Vec<Vec<u32>>,
}

impl Coverage {
    pub fn new(mut sets: Vec<Vec<u32>>) -> Self {
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        Coverage { sets }
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn covered(&self, set: &ItemSet) -> usize {
        let mut elems: Vec<u32> = set
            .iter()
            .flat_map(|x| self.sets[x].iter().copied())
            .collect();
        elems.sort_unstable();
        elems.dedup();
        elems.len()
    }
}

impl<V: Scalar> SetFunction<V> for Coverage {
    fn ground_size(&self) -> usize {
        self.sets.len()
    }

    fn value(&self, set: &ItemSet) -> V {
        V::from_count(self.covered(set))
    }
}
