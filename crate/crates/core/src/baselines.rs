//! Offline reference solutions.

use crate::error::{Error, Result};
use crate::independence::Constraint;
use crate::oracle::{SetFunction, ValueOracle};
use crate::scalar::Scalar;
use crate::set::ItemSet;

/// Largest ground set [`exact_opt`] will enumerate.
pub const EXACT_LIMIT: usize = 20;

/// `k` rounds of adding the item with the largest marginal, ties to the
/// lowest id. `k` above `n` takes every item.
pub fn greedy_cardinality<V, F>(f: &ValueOracle<V, F>, k: usize) -> Result<ItemSet>
where
    V: Scalar,
    F: SetFunction<V>,
{
    greedy(f, |s| s.len() <= k)
}

/// Repeatedly adds the feasible item with the largest marginal until no
/// feasible addition is left. Feasibility checks are not counted.
pub fn greedy_independence<V, F>(f: &ValueOracle<V, F>, system: &Constraint) -> Result<ItemSet>
where
    V: Scalar,
    F: SetFunction<V>,
{
    greedy(f, |s| system.admits(s))
}

fn greedy<V, F>(f: &ValueOracle<V, F>, feasible: impl Fn(&ItemSet) -> bool) -> Result<ItemSet>
where
    V: Scalar,
    F: SetFunction<V>,
{
    let n = f.ground_size();
    let mut set = ItemSet::new();
    loop {
        let mut best: Option<(ItemSet, V)> = None;
        for x in (0..n).filter(|&x| !set.contains(x)) {
            let grown = set.with(x);
            if !feasible(&grown) {
                continue;
            }
            let v = f.evaluate(&grown)?;
            if best.as_ref().is_none_or(|(_, b)| v > *b) {
                best = Some((grown, v));
            }
        }
        match best {
            Some((grown, _)) => set = grown,
            None => break,
        }
    }
    Ok(set)
}

/// Exhaustive maximum over feasible sets.
///
/// Cardinality enumerates every set of size `min(k, n)`; other systems
/// enumerate maximal independent sets. Monotonicity makes both exhaustive.
/// Ties go to the lexicographically smallest set.
pub fn exact_opt<V, F>(f: &ValueOracle<V, F>, system: &Constraint) -> Result<(ItemSet, V)>
where
    V: Scalar,
    F: SetFunction<V>,
{
    let n = f.ground_size();
    if n > EXACT_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: EXACT_LIMIT,
        });
    }
    let mut best: Option<(ItemSet, V)> = None;
    let mut consider = |set: ItemSet| -> Result<()> {
        let v = f.evaluate(&set)?;
        let better = match &best {
            None => true,
            Some((bs, bv)) => v > *bv || (v == *bv && set < *bs),
        };
        if better {
            best = Some((set, v));
        }
        Ok(())
    };
    match system {
        Constraint::Cardinality { k } => {
            let size = (*k).min(n);
            for mask in 0u64..(1 << n) {
                if mask.count_ones() as usize == size {
                    consider(ItemSet::from_mask(mask))?;
                }
            }
        }
        _ => {
            let mut leaves = Vec::new();
            maximal_sets(system, n, 0, &mut ItemSet::new(), &mut leaves);
            for set in leaves {
                consider(set)?;
            }
        }
    }
    Ok(best.expect("the empty set is always a candidate"))
}

fn maximal_sets(system: &Constraint, n: usize, next: usize, current: &mut ItemSet, out: &mut Vec<ItemSet>) {
    if next == n {
        let maximal = (0..n)
            .filter(|&x| !current.contains(x))
            .all(|x| !system.admits(&current.with(x)));
        if maximal {
            out.push(current.clone());
        }
        return;
    }
    current.insert(next);
    if system.admits(current) {
        maximal_sets(system, n, next + 1, current, out);
    }
    current.remove(next);
    maximal_sets(system, n, next + 1, current, out);
}
