//! The three shortlist algorithms.
//!
//! All of them walk a slot schedule, run one [`OnlineMax`] per candidate
//! update, and only copy items into the shortlist `R` when the online max
//! selected them. The returned solution is always a subset of `R`.
//!
//! [`OnlineMax`]: crate::online_max::OnlineMax

mod cardinality;
mod swap;

use std::cmp::Reverse;
use std::ops::RangeInclusive;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::online_max::ceil_tolerant;
use crate::set::{ItemId, ItemSet};

pub use cardinality::cardinality_secretary_run;
pub use swap::{matchoid_secretary_run, matroid_secretary_run, swap_secretary_run};

/// Online-max key: value first, then the lower id.
pub(crate) type Key<V> = (V, Reverse<ItemId>);

/// Resolved algorithm parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgParams {
    pub k: usize,
    pub eps: f64,
    /// Window width in units of `β` slots.
    pub alpha: usize,
    pub beta: usize,
    /// `q = 1 − (1 − 1/(kβ))^k`.
    pub q: f64,
    /// Highest layer index `L`.
    pub layers: usize,
    /// Online-max failure probability `ε/2`.
    pub delta: f64,
}

impl AlgParams {
    /// Cardinality parameters. `α` defaults to `⌈1/ε²⌉` and `β` to `⌈1/ε⌉`.
    /// Requires `α + 4√(α ln(1/ε)) ≤ k`.
    pub fn cardinality(k: usize, eps: f64, alpha: Option<usize>, beta: Option<usize>) -> Result<Self> {
        check_eps_k(k, eps)?;
        let alpha = alpha.unwrap_or_else(|| ceil_tolerant(1.0 / (eps * eps)));
        let beta = beta.unwrap_or_else(|| ceil_tolerant(1.0 / eps));
        if alpha == 0 || beta == 0 {
            return Err(Error::config("alpha and beta must be positive"));
        }
        let spread = alpha as f64 + 4.0 * (alpha as f64 * (1.0 / eps).ln()).sqrt();
        if spread > k as f64 + 1e-9 {
            return Err(Error::config(format!(
                "alpha + 4 sqrt(alpha ln(1/eps)) = {spread:.3} exceeds k = {k}"
            )));
        }
        let q = q_value(k, beta);
        let end = (alpha * beta) as f64;
        let top = q * end + spread_at(q, end, eps);
        let layers = ((top + 1e-9).floor() as usize).max(1);
        Ok(AlgParams {
            k,
            eps,
            alpha,
            beta,
            q,
            layers,
            delta: eps / 2.0,
        })
    }

    /// Swap-loop parameters: one window of `kβ` slots. `β` defaults to
    /// `⌈1/ε⌉`.
    pub fn swap(k: usize, eps: f64, beta: Option<usize>) -> Result<Self> {
        check_eps_k(k, eps)?;
        let beta = beta.unwrap_or_else(|| ceil_tolerant(1.0 / eps));
        if beta == 0 {
            return Err(Error::config("beta must be positive"));
        }
        Ok(AlgParams {
            k,
            eps,
            alpha: k,
            beta,
            q: q_value(k, beta),
            layers: 1,
            delta: eps / 2.0,
        })
    }

    /// `kβ`.
    pub fn slots(&self) -> usize {
        self.k * self.beta
    }
}

fn check_eps_k(k: usize, eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::config(format!("epsilon must lie in (0, 1], got {eps}")));
    }
    if k == 0 {
        return Err(Error::config("k must be at least 1"));
    }
    Ok(())
}

fn q_value(k: usize, beta: usize) -> f64 {
    crate::bounds::slot_hit_probability(k, beta)
}

/// `δ_s = 4√(q·s·ln(1/ε))`.
fn spread_at(q: f64, s: f64, eps: f64) -> f64 {
    4.0 * (q * s * (1.0 / eps).ln()).max(0.0).sqrt()
}

/// Layers updated in window slot `s` (1-based):
/// `[max(1, ⌈qs − δ_s⌉), min(L, ⌊qs + δ_s⌋)]`, or `None` when empty.
pub fn range_u(s: usize, q: f64, eps: f64, layers: usize) -> Option<RangeInclusive<usize>> {
    assert!(s >= 1, "slot indices are 1-based");
    let centre = q * s as f64;
    let spread = spread_at(q, s as f64, eps);
    let lo = ((centre - spread - 1e-9).ceil().max(1.0)) as usize;
    let hi = ((centre + spread + 1e-9).floor().max(0.0) as usize).min(layers);
    (lo <= hi).then_some(lo..=hi)
}

/// Uniform sample of `min(k, |S|)` items of `S`, intersected with `R`.
pub fn finalize_cardinality<R: Rng + ?Sized>(
    set: &ItemSet,
    shortlist: &ItemSet,
    k: usize,
    rng: &mut R,
) -> ItemSet {
    let kept: ItemSet = if set.len() <= k {
        set.clone()
    } else {
        rand::seq::index::sample(rng, set.len(), k)
            .into_iter()
            .map(|i| set.as_slice()[i])
            .collect()
    };
    kept.filter(|x| shortlist.contains(x))
}

/// Run switches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Record a [`TraceEvent`] per candidate update.
    pub trace: bool,
    /// Re-check the structural invariants after every slot with uncounted
    /// oracle calls and report violations in [`RunDiagnostics`].
    pub check_invariants: bool,
}

impl RunOptions {
    pub fn traced(mut self) -> Self {
        self.trace = true;
        self
    }

    pub fn checked(mut self) -> Self {
        self.check_invariants = true;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunCounters {
    pub value_queries: u64,
    pub indep_queries: u64,
    pub online_max_runs: u64,
    /// Largest number of items held at once: solution state, layers,
    /// shortlist and live online-max selections.
    pub buffer_hwm: usize,
    pub shortlist_size: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunDiagnostics {
    /// Slots whose layer range was empty.
    pub skipped_slots: usize,
    /// Slot ends at which the swap state was dependent.
    pub independence_violations: usize,
    /// Layer updates with `f(S ∪ H_ℓ) < f(S ∪ H_{ℓ−1})`.
    pub layer_violations: usize,
    /// Layer updates whose new layer did not have exactly `ℓ` items.
    pub layer_size_violations: usize,
}

/// One candidate update.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEvent {
    /// Global 1-based slot index.
    pub slot: usize,
    /// Layer for cardinality runs; absent for swap runs.
    pub layer: Option<usize>,
    pub selected: Option<ItemId>,
    pub accepted: bool,
    pub removed: Vec<ItemId>,
    pub f_after: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult<V> {
    pub solution: ItemSet,
    pub value: V,
    /// Shortlist in insertion order.
    pub shortlist: Vec<ItemId>,
    pub counters: RunCounters,
    pub diagnostics: RunDiagnostics,
    pub trace: Vec<TraceEvent>,
}

impl<V> RunResult<V> {
    pub fn shortlist_set(&self) -> ItemSet {
        self.shortlist.iter().copied().collect()
    }

    /// The trace as JSON lines.
    pub fn trace_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.trace {
            out.push_str(&serde_json::to_string(e).expect("trace serializes"));
            out.push('\n');
        }
        out
    }
}

/// The shortlist `R`: insertion order plus a membership table.
pub(crate) struct Shortlist {
    order: Vec<ItemId>,
    member: Vec<bool>,
}

impl Shortlist {
    pub(crate) fn new(n: usize) -> Self {
        Shortlist {
            order: Vec::new(),
            member: vec![false; n],
        }
    }

    pub(crate) fn push(&mut self, x: ItemId) -> bool {
        if self.member[x] {
            return false;
        }
        self.member[x] = true;
        self.order.push(x);
        true
    }

    pub(crate) fn contains(&self, x: ItemId) -> bool {
        self.member[x]
    }

    pub(crate) fn len(&self) -> usize {
        self.order.len()
    }

    /// `R′`: `⌊|R_0|/(kβ)⌋` uniform items from the first `prefix` entries.
    pub(crate) fn sample<R: Rng + ?Sized>(&self, prefix: usize, slots: usize, rng: &mut R) -> Vec<ItemId> {
        let size = prefix / slots;
        if size == 0 {
            return Vec::new();
        }
        rand::seq::index::sample(rng, prefix, size)
            .into_iter()
            .map(|i| self.order[i])
            .collect()
    }

    pub(crate) fn into_vec(self) -> Vec<ItemId> {
        self.order
    }
}
