//! Independence systems and the swap primitives used by the swap-loop
//! algorithms.
//!
//! A swap for item `e` against an independent set `S` is a removal set `θ`
//! with `S + e − θ` independent, chosen to maximize `f(S + e − θ)`. Its gain
//! `g(e, S) = f(S + e − θ) − f(S)` may be negative. When no removal set
//! exists the outcome is [`SwapOutcome::Blocked`], which ranks below every
//! feasible gain.

mod matchoid;
mod matroid;

pub use matchoid::{theta_g_matchoid, MatchoidMember, MatchoidSpec, Omega};
pub use matroid::{g_matroid, theta_matroid, MatroidKind, MatroidOracle};

use crate::error::Result;
use crate::oracle::{SetFunction, ValueOracle};
use crate::scalar::Scalar;
use crate::set::{ItemId, ItemSet};

/// Result of a swap evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum SwapOutcome<V> {
    /// `value` is `f(S + e − removals)`; `gain` is `value − f(S)`.
    Feasible { removals: ItemSet, gain: V, value: V },
    /// No removal set restores independence; acts as a gain of −∞.
    Blocked,
}

impl<V> SwapOutcome<V> {
    pub fn gain(&self) -> Option<&V> {
        match self {
            SwapOutcome::Feasible { gain, .. } => Some(gain),
            SwapOutcome::Blocked => None,
        }
    }

    pub fn value(&self) -> Option<&V> {
        match self {
            SwapOutcome::Feasible { value, .. } => Some(value),
            SwapOutcome::Blocked => None,
        }
    }

    pub fn removals(&self) -> Option<&ItemSet> {
        match self {
            SwapOutcome::Feasible { removals, .. } => Some(removals),
            SwapOutcome::Blocked => None,
        }
    }

    pub fn is_blocked(&self) -> bool {
        matches!(self, SwapOutcome::Blocked)
    }
}

/// Membership test for a downward-closed family of item sets.
pub trait IndependenceOracle: Send + Sync {
    fn ground_size(&self) -> usize;

    /// Counted independence query.
    fn is_independent(&self, set: &ItemSet) -> Result<bool>;

    /// Uncounted membership test for validation and contract checks.
    /// Ids must already be known to be in range.
    fn admits(&self, set: &ItemSet) -> bool;

    /// Size of the largest independent set.
    fn rank(&self) -> usize;

    fn queries(&self) -> u64;

    fn reset_queries(&self);

    /// `θ(e, S)` together with `g(e, S)`. `f_set` is a cached `f(S)`.
    fn best_swap<V, F>(
        &self,
        f: &ValueOracle<V, F>,
        e: ItemId,
        set: &ItemSet,
        f_set: Option<&V>,
    ) -> Result<SwapOutcome<V>>
    where
        V: Scalar,
        F: SetFunction<V>;
}

/// The constraint families an algorithm or baseline can run under.
#[derive(Clone, Debug)]
pub enum Constraint {
    Cardinality { k: usize },
    Matroid(MatroidOracle),
    Matchoid(MatchoidSpec),
}

impl Constraint {
    /// Uncounted feasibility test. Cardinality checks only the size.
    pub fn admits(&self, set: &ItemSet) -> bool {
        match self {
            Constraint::Cardinality { k } => set.len() <= *k,
            Constraint::Matroid(m) => m.admits(set),
            Constraint::Matchoid(s) => s.admits(set),
        }
    }

    /// Counted feasibility test; cardinality checks are free.
    pub fn is_independent(&self, set: &ItemSet) -> Result<bool> {
        match self {
            Constraint::Cardinality { k } => Ok(set.len() <= *k),
            Constraint::Matroid(m) => m.is_independent(set),
            Constraint::Matchoid(s) => s.is_independent(set),
        }
    }

    /// Largest feasible set size (`k`).
    pub fn rank(&self) -> usize {
        match self {
            Constraint::Cardinality { k } => *k,
            Constraint::Matroid(m) => m.rank(),
            Constraint::Matchoid(s) => s.rank(),
        }
    }

    pub fn queries(&self) -> u64 {
        match self {
            Constraint::Cardinality { .. } => 0,
            Constraint::Matroid(m) => m.queries(),
            Constraint::Matchoid(s) => s.queries(),
        }
    }

    pub fn reset_queries(&self) {
        match self {
            Constraint::Cardinality { .. } => {}
            Constraint::Matroid(m) => m.reset_queries(),
            Constraint::Matchoid(s) => s.reset_queries(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Constraint::Cardinality { .. } => "cardinality",
            Constraint::Matroid(_) => "matroid",
            Constraint::Matchoid(_) => "matchoid",
        }
    }
}
