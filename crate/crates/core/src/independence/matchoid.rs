use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::oracle::{SetFunction, ValueOracle};
use crate::scalar::Scalar;
use crate::set::{ItemId, ItemSet};

use super::matroid::swap_preconditions;
use super::{IndependenceOracle, MatroidOracle, SwapOutcome};

/// One matroid `M_ℓ` of a matchoid together with its ground set `N_ℓ`.
#[derive(Clone, Debug)]
pub struct MatchoidMember {
    pub matroid: MatroidOracle,
    pub ground: ItemSet,
}

/// Single-removal options of one matroid for an insertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Omega {
    /// `(S ∩ N_ℓ) + e` is already independent in `M_ℓ`.
    NoRemoval,
    /// `{e′ ∈ S ∩ N_ℓ : (S ∩ N_ℓ) + e − e′ ∈ I_ℓ}`; empty means blocked.
    Removals(ItemSet),
}

/// A p-matchoid: `S` is independent iff `S ∩ N_ℓ ∈ I_ℓ` for every member.
///
/// Every membership test against a single member counts as one query.
#[derive(Debug)]
pub struct MatchoidSpec {
    n: usize,
    members: Vec<MatchoidMember>,
    membership: Vec<Vec<usize>>,
    p: usize,
    k: usize,
    queries: AtomicU64,
}

impl Clone for MatchoidSpec {
    fn clone(&self) -> Self {
        MatchoidSpec {
            n: self.n,
            members: self.members.clone(),
            membership: self.membership.clone(),
            p: self.p,
            k: self.k,
            queries: AtomicU64::new(0),
        }
    }
}

impl MatchoidSpec {
    /// Validates that every item of `[0, n)` lies in between 1 and `p`
    /// members. When `k` is not given it is the size of the maximal
    /// independent set built greedily in id order.
    pub fn new(n: usize, members: Vec<MatchoidMember>, p: usize, k: Option<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::config("matchoid needs at least one matroid"));
        }
        if p == 0 {
            return Err(Error::config("matchoid needs p >= 1"));
        }
        let mut membership = vec![Vec::new(); n];
        for (l, m) in members.iter().enumerate() {
            if m.matroid.ground_size() != n {
                return Err(Error::config(format!(
                    "matroid {l} is defined over {} items, expected {n}",
                    m.matroid.ground_size()
                )));
            }
            m.ground.check_within(n)?;
            for x in m.ground.iter() {
                membership[x].push(l);
            }
        }
        for (x, list) in membership.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::config(format!("item {x} belongs to no matroid")));
            }
            if list.len() > p {
                return Err(Error::config(format!(
                    "item {x} belongs to {} matroids but p = {p}",
                    list.len()
                )));
            }
        }
        let mut spec = MatchoidSpec {
            n,
            members,
            membership,
            p,
            k: 0,
            queries: AtomicU64::new(0),
        };
        spec.k = match k {
            Some(k) => k,
            None => {
                let mut greedy = ItemSet::new();
                for x in 0..n {
                    let grown = greedy.with(x);
                    if spec.admits(&grown) {
                        greedy = grown;
                    }
                }
                greedy.len()
            }
        };
        Ok(spec)
    }

    /// The one-matroid matchoid over the full ground set.
    pub fn single(matroid: MatroidOracle) -> Result<Self> {
        let n = matroid.ground_size();
        let k = matroid.rank();
        let member = MatchoidMember {
            matroid,
            ground: (0..n).collect(),
        };
        Self::new(n, vec![member], 1, Some(k))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[MatchoidMember] {
        &self.members
    }

    /// Indices of the matroids containing `e`, ascending.
    pub fn membership_list(&self, e: ItemId) -> Result<&[usize]> {
        self.membership
            .get(e)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownItem { item: e, n: self.n })
    }

    fn member_holds(&self, l: usize, set: &ItemSet) -> bool {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.members[l].matroid.admits(set)
    }

    fn restrict(&self, l: usize, set: &ItemSet) -> ItemSet {
        let ground = &self.members[l].ground;
        set.filter(|x| ground.contains(x))
    }

    /// `Ω_ℓ(e, S)` for member `l`.
    pub fn omega(&self, l: usize, e: ItemId, set: &ItemSet) -> Result<Omega> {
        let member = self.members.get(l).ok_or_else(|| {
            Error::config(format!("matchoid has {} matroids, asked for {l}", self.q()))
        })?;
        if !member.ground.contains(e) {
            return Err(Error::contract(format!("item {e} is not in matroid {l}")));
        }
        set.check_within(self.n)?;
        let local = self.restrict(l, set);
        if !member.matroid.admits(&local) {
            return Err(Error::contract(format!("set is dependent in matroid {l}")));
        }
        let grown = local.with(e);
        if self.member_holds(l, &grown) {
            return Ok(Omega::NoRemoval);
        }
        let mut removals = ItemSet::new();
        for out in local.iter() {
            let mut candidate = grown.clone();
            candidate.remove(out);
            if self.member_holds(l, &candidate) {
                removals.insert(out);
            }
        }
        Ok(Omega::Removals(removals))
    }
}

impl IndependenceOracle for MatchoidSpec {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: &ItemSet) -> Result<bool> {
        set.check_within(self.n)?;
        Ok((0..self.q()).all(|l| self.member_holds(l, &self.restrict(l, set))))
    }

    fn admits(&self, set: &ItemSet) -> bool {
        (0..self.q()).all(|l| self.members[l].matroid.admits(&self.restrict(l, set)))
    }

    fn rank(&self) -> usize {
        self.k
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
        theta_g_matchoid(f, self, e, set, f_set)
    }
}

/// `θ(e, S)` and `g(e, S)` for a matchoid.
///
/// Enumerates `λ(e, S) = Ω_{ℓ_1} × … × Ω_{ℓ_t}` over the matroids holding
/// `e`, where a matroid that already admits `e` contributes only the
/// no-removal option. Each distinct union `μ(r)` is evaluated once. The best
/// gain wins; ties go to the smaller removal set, then the lexicographically
/// smallest one.
pub fn theta_g_matchoid<V, F>(
    f: &ValueOracle<V, F>,
    spec: &MatchoidSpec,
    e: ItemId,
    set: &ItemSet,
    f_set: Option<&V>,
) -> Result<SwapOutcome<V>>
where
    V: Scalar,
    F: SetFunction<V>,
{
    swap_preconditions(spec.n, e, set, spec.admits(set))?;
    let mut factors: Vec<Vec<ItemId>> = Vec::new();
    for &l in spec.membership_list(e)? {
        match spec.omega(l, e, set)? {
            Omega::NoRemoval => {}
            Omega::Removals(r) if r.is_empty() => return Ok(SwapOutcome::Blocked),
            Omega::Removals(r) => factors.push(r.into_vec()),
        }
    }
    let base = match f_set {
        Some(v) => v.clone(),
        None => f.evaluate(set)?,
    };
    let grown = set.with(e);

    let mut gains: BTreeMap<ItemSet, (V, V)> = BTreeMap::new();
    let mut choice = vec![0usize; factors.len()];
    loop {
        let mu: ItemSet = factors.iter().zip(&choice).map(|(f, &i)| f[i]).collect();
        if let std::collections::btree_map::Entry::Vacant(slot) = gains.entry(mu) {
            let after = grown.filter(|x| !slot.key().contains(x));
            let value = f.evaluate(&after)?;
            slot.insert((value.clone() - base.clone(), value));
        }
        // odometer over the product
        let mut pos = 0;
        while pos < factors.len() {
            choice[pos] += 1;
            if choice[pos] < factors[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == factors.len() {
            break;
        }
    }

    let mut best: Option<(ItemSet, V, V)> = None;
    for (mu, (gain, value)) in gains {
        let better = match &best {
            None => true,
            Some((bmu, bgain, _)) => gain > *bgain || (gain == *bgain && mu.len() < bmu.len()),
        };
        if better {
            best = Some((mu, gain, value));
        }
    }
    let (removals, gain, value) = best.expect("product has at least one element");
    Ok(SwapOutcome::Feasible {
        removals,
        gain,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::independence::theta_matroid;

    fn partition_member(n: usize, ground: &[ItemId], parts: &[usize], caps: Vec<usize>) -> MatchoidMember {
        let ground: ItemSet = ground.iter().copied().collect();
        MatchoidMember {
            matroid: MatroidOracle::partition_on(n, &ground, parts, caps).unwrap(),
            ground,
        }
    }

    /// Items 0..4; matroid 0 has parts {0,2}, {1}; matroid 1 has {2,3}, {4}.
    /// Item 2 is shared.
    fn two_partitions() -> MatchoidSpec {
        MatchoidSpec::new(
            5,
            vec![
                partition_member(5, &[0, 1, 2], &[0, 1, 0], vec![1, 1]),
                partition_member(5, &[2, 3, 4], &[0, 0, 1], vec![1, 1]),
            ],
            2,
            None,
        )
        .unwrap()
    }

    #[test]
    fn conjunction_of_members() {
        let spec = two_partitions();
        assert!(spec.is_independent(&ItemSet::from([2])).unwrap());
        assert!(!spec.is_independent(&ItemSet::from([2, 3])).unwrap());
        assert!(!spec.is_independent(&ItemSet::from([0, 2])).unwrap());
        assert!(spec.is_independent(&ItemSet::from([0, 1, 3, 4])).unwrap());
        assert_eq!(spec.rank(), 4);
    }

    #[test]
    fn membership_lists() {
        let spec = two_partitions();
        assert_eq!(spec.membership_list(0).unwrap(), &[0]);
        assert_eq!(spec.membership_list(2).unwrap(), &[0, 1]);
        assert!(spec.membership_list(9).is_err());
    }

    #[test]
    fn shared_across_three_of_five() {
        let n = 3;
        let members = (0..5)
            .map(|l| {
                let ground: Vec<ItemId> = if l < 3 { vec![0, 1] } else { vec![2] };
                MatchoidMember {
                    matroid: MatroidOracle::uniform(n, 1),
                    ground: ground.into_iter().collect(),
                }
            })
            .collect();
        let spec = MatchoidSpec::new(n, members, 3, None).unwrap();
        assert_eq!(spec.membership_list(0).unwrap(), &[0, 1, 2]);
        assert_eq!(spec.p(), 3);
    }

    #[test]
    fn p_violation_and_orphans_rejected() {
        let mk = || partition_member(3, &[0, 1, 2], &[0, 0, 0], vec![1]);
        assert!(MatchoidSpec::new(3, vec![mk(), mk()], 1, None).is_err());
        let partial = partition_member(3, &[0, 1], &[0, 0], vec![1]);
        assert!(MatchoidSpec::new(3, vec![partial], 1, None).is_err());
    }

    #[test]
    fn omega_examples() {
        let spec = two_partitions();
        // part {0,2} of matroid 0 is full with 0; inserting 2 forces 0 out
        assert_eq!(
            spec.omega(0, 2, &ItemSet::from([0, 1])).unwrap(),
            Omega::Removals(ItemSet::from([0]))
        );
        assert_eq!(spec.omega(1, 2, &ItemSet::from([4])).unwrap(), Omega::NoRemoval);

        let single = MatchoidSpec::new(
            2,
            vec![MatchoidMember {
                matroid: MatroidOracle::uniform(2, 1),
                ground: ItemSet::from([0, 1]),
            }],
            1,
            None,
        )
        .unwrap();
        assert_eq!(
            single.omega(0, 1, &ItemSet::from([0])).unwrap(),
            Omega::Removals(ItemSet::from([0]))
        );
    }

    #[test]
    fn two_forced_removals() {
        let f = ValueOracle::modular(vec![1.0, 1.0, 5.0, 1.0, 1.0]).unwrap();
        let spec = two_partitions();
        let out = theta_g_matchoid(&f, &spec, 2, &ItemSet::from([0, 1, 3, 4]), None).unwrap();
        assert_eq!(
            out,
            SwapOutcome::Feasible {
                removals: ItemSet::from([0, 3]),
                gain: 3.0,
                value: 7.0
            }
        );
        let after = ItemSet::from([1, 2, 4]);
        assert!(spec.is_independent(&after).unwrap());
    }

    #[test]
    fn free_insertion_is_marginal() {
        let f = ValueOracle::modular(vec![1.0, 1.0, 5.0, 1.0, 1.0]).unwrap();
        let spec = two_partitions();
        let out = theta_g_matchoid(&f, &spec, 2, &ItemSet::from([1, 4]), None).unwrap();
        assert_eq!(out.removals(), Some(&ItemSet::new()));
        assert_eq!(out.gain(), Some(&5.0));
    }

    #[test]
    fn single_matroid_agrees_with_matroid_swap() {
        let f = ValueOracle::modular(vec![3.0, 1.0, 1.0, 2.0, 4.0]).unwrap();
        let m = MatroidOracle::partition(vec![0, 0, 1, 1, 0], vec![2, 1]).unwrap();
        let spec = MatchoidSpec::single(m.clone()).unwrap();
        for s in [vec![0, 1], vec![0, 2], vec![1, 3], vec![]] {
            let s: ItemSet = s.into_iter().collect();
            for e in (0..5).filter(|&e| !s.contains(e)) {
                assert_eq!(
                    theta_matroid(&f, &m, e, &s, None).unwrap(),
                    theta_g_matchoid(&f, &spec, e, &s, None).unwrap(),
                    "e={e} s={s:?}"
                );
            }
        }
    }

    #[test]
    fn ties_prefer_smaller_then_lexicographic() {
        // item 2 covers everything, so every removal combination ties
        let f: ValueOracle<f64> =
            ValueOracle::coverage(vec![vec![0], vec![1], vec![0, 1, 3, 4], vec![3]]);
        let member = |ground: [ItemId; 3]| MatchoidMember {
            matroid: MatroidOracle::uniform(4, 2),
            ground: ItemSet::from(ground),
        };
        let spec = MatchoidSpec::new(4, vec![member([0, 1, 2]), member([0, 2, 3])], 2, None).unwrap();
        let out = theta_g_matchoid(&f, &spec, 2, &ItemSet::from([0, 1, 3]), None).unwrap();
        assert_eq!(out.removals(), Some(&ItemSet::from([0])));
        assert_eq!(out.gain(), Some(&1.0));
    }
}
