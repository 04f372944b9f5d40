use std::cmp::Reverse;

use rand::Rng;

use crate::error::{Error, Result};
use crate::online_max::{Observation, OnlineMax};
use crate::oracle::{SetFunction, ValueOracle};
use crate::scalar::Scalar;
use crate::set::{ItemId, ItemSet};
use crate::stream::{slot_items, Configuration, Schedule};

use super::{
    finalize_cardinality, range_u, AlgParams, Key, RunCounters, RunDiagnostics, RunOptions,
    RunResult, Shortlist, TraceEvent,
};

/// A built layer `H_ℓ` and the cached `f(S ∪ H_ℓ)`.
#[derive(Clone)]
struct Layer<V> {
    items: ItemSet,
    value: V,
}

/// Best candidate of one layer update: the online max's running leader with
/// its evaluated `f(S ∪ H_{ℓ−1} + m)`.
struct Leader<V> {
    item: ItemId,
    value: V,
    from_slot: bool,
}

/// Cardinality-constrained shortlist run.
///
/// Each window keeps layers `H_0 = ∅, H_1, …, H_L`. In window slot `s`,
/// every layer `ℓ ∈ U_s` may be rebuilt as `H_{ℓ−1} + m`, where `m`
/// maximizes `Δ(x | S ∪ H_{ℓ−1})` over the slot and a sample `R′` of the
/// shortlist, using the layers as they stood after the previous slot. The
/// rebuild happens when it strictly improves `f(S ∪ H_ℓ)`, and `m` joins
/// `R` when the online max selected it. At window end the highest built
/// layer joins `S`. The output is a uniform `k`-sample of `S`, cut to `R`.
pub fn cardinality_secretary_run<V, F, R>(
    f: &ValueOracle<V, F>,
    params: &AlgParams,
    config: &Configuration,
    schedule: &Schedule,
    rng: &mut R,
    opts: RunOptions,
) -> Result<RunResult<V>>
where
    V: Scalar,
    F: SetFunction<V>,
    R: Rng + ?Sized,
{
    check_inputs(f.ground_size(), params, config, schedule)?;
    let n = f.ground_size();
    let slots = params.slots();
    let queries_at_start = f.queries();

    let mut counters = RunCounters::default();
    let mut diagnostics = RunDiagnostics::default();
    let mut trace = Vec::new();
    let mut shortlist = Shortlist::new(n);
    let mut chosen = ItemSet::new();
    let mut chosen_value = f.evaluate(&chosen)?;

    for window in schedule.windows() {
        let mut layers: Vec<Option<Layer<V>>> = vec![None; params.layers + 1];
        layers[0] = Some(Layer {
            items: ItemSet::new(),
            value: chosen_value.clone(),
        });
        for global in window.clone() {
            let s = global - window.start + 1;
            let items = slot_items(config, global)?;
            let Some(range) = range_u(s, params.q, params.eps, params.layers) else {
                diagnostics.skipped_slots += 1;
                continue;
            };
            let before = layers.clone();
            let sample_from = shortlist.len();
            let mut live_selections = 0;
            for l in range {
                let Some(prev) = &before[l - 1] else {
                    continue;
                };
                let base = chosen.union(&prev.items);
                let sample = shortlist.sample(sample_from, slots, rng);
                let mut omax: OnlineMax<Key<V>> = OnlineMax::new(items.len(), params.delta)?;
                counters.online_max_runs += 1;

                let mut leader: Option<Leader<V>> = None;
                let mut warm: Option<(Key<V>, V, ItemId)> = None;
                for &x in sample.iter().filter(|&&x| !base.contains(x)) {
                    let value = f.evaluate(&base.with(x))?;
                    let key = (value.clone() - prev.value.clone(), Reverse(x));
                    if warm.as_ref().is_none_or(|(k, _, _)| key > *k) {
                        warm = Some((key, value, x));
                    }
                }
                if let Some((key, value, item)) = warm {
                    omax.warm_start(key)?;
                    leader = Some(Leader {
                        item,
                        value,
                        from_slot: false,
                    });
                }
                for &x in items {
                    let value = f.evaluate(&base.with(x))?;
                    let key = (value.clone() - prev.value.clone(), Reverse(x));
                    if omax.observe(key)? != Observation::Ignored {
                        leader = Some(Leader {
                            item: x,
                            value,
                            from_slot: true,
                        });
                    }
                }
                live_selections += omax.selected().len();

                let Some(m) = leader else {
                    continue;
                };
                let current = before[l].as_ref().map_or(&chosen_value, |h| &h.value);
                let accepted = *current < m.value;
                if accepted {
                    let selected = m.from_slot && omax.selected().iter().any(|(_, k)| k.1 .0 == m.item);
                    if selected {
                        shortlist.push(m.item);
                    }
                    let layer = Layer {
                        items: prev.items.with(m.item),
                        value: m.value.clone(),
                    };
                    if opts.check_invariants {
                        let extended = f.peek(&chosen.union(&layer.items))?;
                        if extended < f.peek(&base)? {
                            diagnostics.layer_violations += 1;
                        }
                        if layer.items.len() != l {
                            diagnostics.layer_size_violations += 1;
                        }
                    }
                    layers[l] = Some(layer);
                }
                if opts.trace {
                    trace.push(TraceEvent {
                        slot: global,
                        layer: Some(l),
                        selected: Some(m.item),
                        accepted,
                        removed: Vec::new(),
                        f_after: layers[l]
                            .as_ref()
                            .map_or(&chosen_value, |h| &h.value)
                            .to_f64_lossy(),
                    });
                }
            }
            let held = chosen.len()
                + layers.iter().flatten().map(|h| h.items.len()).sum::<usize>()
                + shortlist.len()
                + live_selections;
            counters.buffer_hwm = counters.buffer_hwm.max(held);
        }
        if let Some(top) = layers[1..].iter().rev().flatten().next() {
            chosen = chosen.union(&top.items);
            chosen_value = top.value.clone();
        }
    }

    let shortlist_items: ItemSet = (0..n).filter(|&x| shortlist.contains(x)).collect();
    let solution = finalize_cardinality(&chosen, &shortlist_items, params.k, rng);
    counters.value_queries = f.queries() - queries_at_start;
    counters.shortlist_size = shortlist.len();
    Ok(RunResult {
        value: f.peek(&solution)?,
        solution,
        shortlist: shortlist.into_vec(),
        counters,
        diagnostics,
        trace,
    })
}

pub(super) fn check_inputs(
    n: usize,
    params: &AlgParams,
    config: &Configuration,
    schedule: &Schedule,
) -> Result<()> {
    if schedule.n() != n || config.order().len() != n {
        return Err(Error::config(format!(
            "stream of {} items does not match a ground set of {n}",
            schedule.n()
        )));
    }
    if schedule.k() != params.k || schedule.beta() != params.beta {
        return Err(Error::config("schedule was built for different k or beta"));
    }
    if schedule.alpha() != Some(params.alpha) {
        return Err(Error::config(format!(
            "schedule must be grouped with alpha = {}",
            params.alpha
        )));
    }
    if config.slots() != schedule.slots() {
        return Err(Error::config("configuration was cut by a different schedule"));
    }
    Ok(())
}
