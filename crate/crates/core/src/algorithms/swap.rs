use std::cmp::Reverse;

use rand::Rng;

use crate::error::Result;
use crate::independence::{IndependenceOracle, MatchoidSpec, MatroidOracle, SwapOutcome};
use crate::online_max::{Observation, OnlineMax};
use crate::oracle::{SetFunction, ValueOracle};
use crate::scalar::Scalar;
use crate::set::{ItemId, ItemSet};
use crate::stream::{slot_items, Configuration, Schedule};

use super::cardinality::check_inputs;
use super::{AlgParams, Key, RunCounters, RunDiagnostics, RunOptions, RunResult, Shortlist, TraceEvent};

struct Candidate<V> {
    item: ItemId,
    outcome: SwapOutcome<V>,
    from_slot: bool,
}

/// Matroid shortlist run: the swap loop under a single matroid.
pub fn matroid_secretary_run<V, F, R>(
    f: &ValueOracle<V, F>,
    matroid: &MatroidOracle,
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
    swap_secretary_run(f, matroid, params, config, schedule, rng, opts)
}

/// Matchoid shortlist run: the swap loop with multi-item removals.
pub fn matchoid_secretary_run<V, F, R>(
    f: &ValueOracle<V, F>,
    spec: &MatchoidSpec,
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
    swap_secretary_run(f, spec, params, config, schedule, rng, opts)
}

/// The swap loop over one window of `kβ` slots.
///
/// In each slot the online max looks for the item `m` of the slot or of a
/// shortlist sample `R′` with the best swap gain `g(m, SH)`. When
/// `f(SH) < f(SH + m − θ(m, SH))` the swap is applied, and `m` joins `R`
/// when the online max selected it. Returns `SH ∩ R`.
pub fn swap_secretary_run<V, F, C, R>(
    f: &ValueOracle<V, F>,
    system: &C,
    params: &AlgParams,
    config: &Configuration,
    schedule: &Schedule,
    rng: &mut R,
    opts: RunOptions,
) -> Result<RunResult<V>>
where
    V: Scalar,
    F: SetFunction<V>,
    C: IndependenceOracle,
    R: Rng + ?Sized,
{
    let n = f.ground_size();
    check_inputs(n, params, config, schedule)?;
    if system.ground_size() != n {
        return Err(crate::Error::config(format!(
            "constraint covers {} items, oracle covers {n}",
            system.ground_size()
        )));
    }
    let slots = params.slots();
    let value_start = f.queries();
    let indep_start = system.queries();

    let mut counters = RunCounters::default();
    let mut diagnostics = RunDiagnostics::default();
    let mut trace = Vec::new();
    let mut shortlist = Shortlist::new(n);
    let mut state = ItemSet::new();
    let mut state_value = f.evaluate(&state)?;

    for slot in 1..=schedule.slots() {
        let items = slot_items(config, slot)?;
        let sample = shortlist.sample(shortlist.len(), slots, rng);
        let mut omax: OnlineMax<Key<V>> = OnlineMax::new(items.len(), params.delta)?;
        counters.online_max_runs += 1;

        let mut leader: Option<Candidate<V>> = None;
        let mut warm: Option<(Key<V>, Candidate<V>)> = None;
        for &x in sample.iter().filter(|&&x| !state.contains(x)) {
            let outcome = system.best_swap(f, x, &state, Some(&state_value))?;
            let Some(gain) = outcome.gain() else {
                continue;
            };
            let key = (gain.clone(), Reverse(x));
            if warm.as_ref().is_none_or(|(k, _)| key > *k) {
                let candidate = Candidate {
                    item: x,
                    outcome,
                    from_slot: false,
                };
                warm = Some((key, candidate));
            }
        }
        if let Some((key, candidate)) = warm {
            omax.warm_start(key)?;
            leader = Some(candidate);
        }
        for &x in items {
            let outcome = system.best_swap(f, x, &state, Some(&state_value))?;
            let Some(gain) = outcome.gain() else {
                omax.skip()?;
                continue;
            };
            if omax.observe((gain.clone(), Reverse(x)))? != Observation::Ignored {
                leader = Some(Candidate {
                    item: x,
                    outcome,
                    from_slot: true,
                });
            }
        }
        let live_selections = omax.selected().len();

        if let Some(m) = leader {
            let SwapOutcome::Feasible { removals, value, .. } = m.outcome else {
                unreachable!("blocked items never lead");
            };
            let accepted = state_value < value;
            if accepted {
                if m.from_slot && omax.selected().iter().any(|(_, k)| k.1 .0 == m.item) {
                    shortlist.push(m.item);
                }
                state = state.swapped(m.item, &removals);
                state_value = value;
            }
            if opts.trace {
                trace.push(TraceEvent {
                    slot,
                    layer: None,
                    selected: Some(m.item),
                    accepted,
                    removed: if accepted { removals.into_vec() } else { Vec::new() },
                    f_after: state_value.to_f64_lossy(),
                });
            }
        }
        if opts.check_invariants && !system.admits(&state) {
            diagnostics.independence_violations += 1;
        }
        let held = state.len() + shortlist.len() + live_selections;
        counters.buffer_hwm = counters.buffer_hwm.max(held);
    }

    let solution = state.filter(|x| shortlist.contains(x));
    counters.value_queries = f.queries() - value_start;
    counters.indep_queries = system.queries() - indep_start;
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{make_schedule, permute_stream};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(n: usize, params: &AlgParams, seed: u64) -> (Schedule, Configuration, ChaCha8Rng) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let schedule = make_schedule(n, params.k, params.beta, &mut rng)
            .unwrap()
            .group_windows(params.alpha)
            .unwrap();
        let config = permute_stream(&schedule, &mut rng);
        (schedule, config, rng)
    }

    #[test]
    fn empty_stream_gives_empty_result() {
        let f = ValueOracle::<f64>::coverage(vec![]);
        let m = MatroidOracle::uniform(0, 2);
        let params = AlgParams::swap(2, 0.5, None).unwrap();
        let (schedule, config, mut rng) = setup(0, &params, 0);
        let run = matroid_secretary_run(&f, &m, &params, &config, &schedule, &mut rng, RunOptions::default()).unwrap();
        assert!(run.solution.is_empty());
        assert!(run.shortlist.is_empty());
    }

    #[test]
    fn partition_state_stays_independent() {
        let n = 120;
        let f = ValueOracle::modular((0..n).map(|i| ((i * 13) % 29) as f64 + 1.0).collect()).unwrap();
        let m = MatroidOracle::partition((0..n).map(|i| i % 6).collect(), vec![1; 6]).unwrap();
        let params = AlgParams::swap(6, 0.5, None).unwrap();
        for seed in 0..10 {
            let (schedule, config, mut rng) = setup(n, &params, seed);
            let opts = RunOptions::default().checked().traced();
            let run = matroid_secretary_run(&f, &m, &params, &config, &schedule, &mut rng, opts).unwrap();
            assert_eq!(run.diagnostics.independence_violations, 0);
            assert!(m.admits(&run.solution));
            assert!(run.solution.is_subset(&run.shortlist_set()));
            assert!(run.counters.indep_queries > 0);
            assert!(run.trace.iter().all(|e| e.removed.len() <= 1));
        }
    }

    #[test]
    fn single_member_matchoid_matches_matroid() {
        let n = 80;
        let f: ValueOracle<f64> = ValueOracle::coverage(
            (0..n).map(|i| vec![(i % 11) as u32, ((i * 5) % 31 + 11) as u32]).collect(),
        );
        let m = MatroidOracle::partition((0..n).map(|i| i % 4).collect(), vec![2, 1, 1, 2]).unwrap();
        let spec = MatchoidSpec::single(m.clone()).unwrap();
        let params = AlgParams::swap(6, 0.4, None).unwrap();
        for seed in 0..5 {
            let (schedule, config, _) = setup(n, &params, seed);
            let opts = RunOptions::default().traced();
            let mut r1 = ChaCha8Rng::seed_from_u64(99 + seed);
            let mut r2 = ChaCha8Rng::seed_from_u64(99 + seed);
            let a = matroid_secretary_run(&f, &m, &params, &config, &schedule, &mut r1, opts).unwrap();
            let b = matchoid_secretary_run(&f, &spec, &params, &config, &schedule, &mut r2, opts).unwrap();
            assert_eq!(a.trace, b.trace);
            assert_eq!(a.solution, b.solution);
            assert_eq!(a.shortlist, b.shortlist);
        }
    }

    #[test]
    fn constraint_size_mismatch_rejected() {
        let f = ValueOracle::modular(vec![1.0; 10]).unwrap();
        let m = MatroidOracle::uniform(9, 2);
        let params = AlgParams::swap(2, 0.5, None).unwrap();
        let (schedule, config, mut rng) = setup(10, &params, 0);
        assert!(matroid_secretary_run(&f, &m, &params, &config, &schedule, &mut rng, RunOptions::default()).is_err());
    }
}
