use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::oracle::{SetFunction, ValueOracle};
use crate::scalar::Scalar;
use crate::set::{ItemId, ItemSet};

use super::{IndependenceOracle, SwapOutcome};

/// Part id of items outside a partition matroid's ground set.
pub(crate) const NO_PART: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatroidKind {
    /// Every set of size at most `k`.
    Uniform { k: usize },
    /// At most `caps[j]` items from part `j`. `part_of` is indexed by global
    /// item id; items outside the ground set carry no part and are never
    /// independent.
    Partition { part_of: Vec<usize>, caps: Vec<usize> },
}

/// A matroid over item ids `[0, n)` with a query counter.
#[derive(Debug)]
pub struct MatroidOracle {
    kind: MatroidKind,
    n: usize,
    queries: AtomicU64,
}

impl Clone for MatroidOracle {
    fn clone(&self) -> Self {
        MatroidOracle {
            kind: self.kind.clone(),
            n: self.n,
            queries: AtomicU64::new(0),
        }
    }
}

impl MatroidOracle {
    pub fn uniform(n: usize, k: usize) -> Self {
        MatroidOracle {
            kind: MatroidKind::Uniform { k },
            n,
            queries: AtomicU64::new(0),
        }
    }

    /// Partition matroid with `part_of[x]` the part of item `x`.
    pub fn partition(part_of: Vec<usize>, caps: Vec<usize>) -> Result<Self> {
        if let Some(x) = part_of.iter().position(|&p| p >= caps.len()) {
            return Err(Error::config(format!(
                "item {x} is assigned to part {} but only {} caps are given",
                part_of[x],
                caps.len()
            )));
        }
        Ok(Self::partition_unchecked(part_of, caps))
    }

    /// Partition matroid over the items of `ground` within `[0, n)`.
    /// `parts[i]` is the part of `ground[i]`.
    pub fn partition_on(n: usize, ground: &ItemSet, parts: &[usize], caps: Vec<usize>) -> Result<Self> {
        if ground.len() != parts.len() {
            return Err(Error::config(format!(
                "{} part ids given for a ground set of {} items",
                parts.len(),
                ground.len()
            )));
        }
        ground.check_within(n)?;
        let mut part_of = vec![NO_PART; n];
        for (x, &p) in ground.iter().zip(parts) {
            if p >= caps.len() {
                return Err(Error::config(format!(
                    "item {x} is assigned to part {p} but only {} caps are given",
                    caps.len()
                )));
            }
            part_of[x] = p;
        }
        Ok(Self::partition_unchecked(part_of, caps))
    }

    fn partition_unchecked(part_of: Vec<usize>, caps: Vec<usize>) -> Self {
        MatroidOracle {
            n: part_of.len(),
            kind: MatroidKind::Partition { part_of, caps },
            queries: AtomicU64::new(0),
        }
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    fn holds(&self, set: &ItemSet) -> bool {
        match &self.kind {
            MatroidKind::Uniform { k } => set.len() <= *k,
            MatroidKind::Partition { part_of, caps } => {
                let mut used = vec![0usize; caps.len()];
                set.iter().all(|x| {
                    let p = part_of[x];
                    if p == NO_PART {
                        return false;
                    }
                    used[p] += 1;
                    used[p] <= caps[p]
                })
            }
        }
    }
}

impl IndependenceOracle for MatroidOracle {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: &ItemSet) -> Result<bool> {
        set.check_within(self.n)?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        Ok(self.holds(set))
    }

    fn admits(&self, set: &ItemSet) -> bool {
        self.holds(set)
    }

    fn rank(&self) -> usize {
        match &self.kind {
            MatroidKind::Uniform { k } => (*k).min(self.n),
            MatroidKind::Partition { part_of, caps } => {
                let mut sizes = vec![0usize; caps.len()];
                for &p in part_of.iter().filter(|&&p| p != NO_PART) {
                    sizes[p] += 1;
                }
                sizes.iter().zip(caps).map(|(s, c)| s.min(c)).sum()
            }
        }
    }

    fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    fn reset_queries(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    fn best_swap<V, F>(
        &self,
        f: &ValueOracle<V, F>,
        e: ItemId,
        set: &ItemSet,
        f_set: Option<&V>,
    ) -> Result<SwapOutcome<V>>
    where
        V: Scalar,
        F: SetFunction<V>,
    {
        theta_matroid(f, self, e, set, f_set)
    }
}

pub(crate) fn swap_preconditions(n: usize, e: ItemId, set: &ItemSet, independent: bool) -> Result<()> {
    if e >= n {
        return Err(Error::UnknownItem { item: e, n });
    }
    set.check_within(n)?;
    if set.contains(e) {
        return Err(Error::contract(format!("item {e} is already in the set")));
    }
    if !independent {
        return Err(Error::contract("swap requested against a dependent set"));
    }
    Ok(())
}

/// `θ(e, S)` and `g(e, S)` for a single matroid.
///
/// No removal when `S + e` is independent. Otherwise the feasible `e′ ∈ S`
/// maximizing `f(S + e − e′)`, ties to the lowest id.
pub fn theta_matroid<V, F>(
    f: &ValueOracle<V, F>,
    m: &MatroidOracle,
    e: ItemId,
    set: &ItemSet,
    f_set: Option<&V>,
) -> Result<SwapOutcome<V>>
where
    V: Scalar,
    F: SetFunction<V>,
{
    swap_preconditions(m.n, e, set, m.holds(set))?;
    let base = match f_set {
        Some(v) => v.clone(),
        None => f.evaluate(set)?,
    };
    let grown = set.with(e);
    if m.is_independent(&grown)? {
        let value = f.evaluate(&grown)?;
        return Ok(SwapOutcome::Feasible {
            removals: ItemSet::new(),
            gain: value.clone() - base,
            value,
        });
    }
    let mut best: Option<(ItemId, V, V)> = None;
    for out in set.iter() {
        let mut candidate = grown.clone();
        candidate.remove(out);
        if !m.is_independent(&candidate)? {
            continue;
        }
        let value = f.evaluate(&candidate)?;
        let gain = value.clone() - base.clone();
        if best.as_ref().is_none_or(|(_, g, _)| gain > *g) {
            best = Some((out, gain, value));
        }
    }
    Ok(match best {
        Some((out, gain, value)) => SwapOutcome::Feasible {
            removals: ItemSet::singleton(out),
            gain,
            value,
        },
        None => SwapOutcome::Blocked,
    })
}

/// `g(e, S)`; `None` stands for the −∞ of a blocked insertion.
pub fn g_matroid<V, F>(
    f: &ValueOracle<V, F>,
    m: &MatroidOracle,
    e: ItemId,
    set: &ItemSet,
) -> Result<Option<V>>
where
    V: Scalar,
    F: SetFunction<V>,
{
    Ok(theta_matroid(f, m, e, set, None)?.gain().cloned())
}

#[cfg(test)]
mod tests {
    use super::*;

    // a=0, b=1, c=2
    fn abc() -> ValueOracle<f64> {
        ValueOracle::modular(vec![1.0, 2.0, 3.0]).unwrap()
    }

    #[test]
    fn uniform_independence() {
        let m = MatroidOracle::uniform(5, 2);
        assert!(m.is_independent(&ItemSet::from([0, 4])).unwrap());
        assert!(!m.is_independent(&ItemSet::from([0, 1, 2])).unwrap());
        assert!(m.is_independent(&ItemSet::new()).unwrap());
        assert_eq!(m.queries(), 3);
        assert_eq!(m.rank(), 2);
        assert!(m.is_independent(&ItemSet::from([5])).is_err());
    }

    #[test]
    fn partition_independence() {
        // {a, b | c}, caps 1/1
        let m = MatroidOracle::partition(vec![0, 0, 1], vec![1, 1]).unwrap();
        assert!(m.is_independent(&ItemSet::from([0, 2])).unwrap());
        assert!(!m.is_independent(&ItemSet::from([0, 1])).unwrap());
        assert_eq!(m.rank(), 2);
        assert!(MatroidOracle::partition(vec![0, 2], vec![1, 1]).is_err());
    }

    #[test]
    fn partition_on_subset_excludes_outsiders() {
        let ground = ItemSet::from([1, 3]);
        let m = MatroidOracle::partition_on(5, &ground, &[0, 0], vec![1]).unwrap();
        assert!(m.admits(&ItemSet::from([3])));
        assert!(!m.admits(&ItemSet::from([0])));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn theta_uniform_evicts_cheapest() {
        let f = abc();
        let m = MatroidOracle::uniform(3, 2);
        let s = ItemSet::from([0, 1]);
        let out = theta_matroid(&f, &m, 2, &s, None).unwrap();
        assert_eq!(
            out,
            SwapOutcome::Feasible {
                removals: ItemSet::from([0]),
                gain: 2.0,
                value: 5.0
            }
        );
        assert_eq!(g_matroid(&f, &m, 2, &s).unwrap(), Some(2.0));
    }

    #[test]
    fn theta_no_removal_when_room() {
        let f = abc();
        let m = MatroidOracle::uniform(3, 2);
        let s = ItemSet::from([0]);
        let out = theta_matroid(&f, &m, 2, &s, None).unwrap();
        assert_eq!(out.removals(), Some(&ItemSet::new()));
        assert_eq!(out.gain(), Some(&f.marginal(2, &s, None).unwrap()));
    }

    #[test]
    fn theta_partition_only_feasible_swap() {
        let f = abc();
        let m = MatroidOracle::partition(vec![0, 0, 1], vec![1, 1]).unwrap();
        let out = theta_matroid(&f, &m, 1, &ItemSet::from([0, 2]), None).unwrap();
        assert_eq!(out.removals(), Some(&ItemSet::from([0])));
        assert_eq!(out.gain(), Some(&1.0));
    }

    #[test]
    fn negative_gain_reported() {
        let f = ValueOracle::modular(vec![5.0, 1.0]).unwrap();
        let m = MatroidOracle::uniform(2, 1);
        assert_eq!(g_matroid(&f, &m, 1, &ItemSet::from([0])).unwrap(), Some(-4.0));
    }

    #[test]
    fn tie_goes_to_lowest_id() {
        let f = ValueOracle::modular(vec![1.0, 1.0, 1.0, 2.0]).unwrap();
        let m = MatroidOracle::uniform(4, 3);
        let out = theta_matroid(&f, &m, 3, &ItemSet::from([0, 1, 2]), None).unwrap();
        assert_eq!(out.removals(), Some(&ItemSet::from([0])));
    }

    #[test]
    fn contract_violations() {
        let f = abc();
        let m = MatroidOracle::uniform(3, 1);
        assert!(matches!(
            theta_matroid(&f, &m, 2, &ItemSet::from([0, 1]), None),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            theta_matroid(&f, &m, 0, &ItemSet::from([0]), None),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            theta_matroid(&f, &m, 3, &ItemSet::new(), None),
            Err(Error::UnknownItem { .. })
        ));
    }

    #[test]
    fn blocked_when_item_outside_partition_ground() {
        let f = abc();
        let m = MatroidOracle::partition_on(3, &ItemSet::from([0, 1]), &[0, 0], vec![1]).unwrap();
        assert!(theta_matroid(&f, &m, 2, &ItemSet::from([0]), None)
            .unwrap()
            .is_blocked());
    }
}
