//! Value oracles: monotone submodular set functions behind a query counter.

mod check;
mod families;
pub mod hardness;

use std::marker::PhantomData;
use std::sync::atomic::{AtomicU64, Ordering};

pub use check::{
    check_monotone_submodular, check_monotone_submodular_within, CheckReport, Violation, ViolationKind,
    CHECK_LIMIT, CHECK_TOLERANCE,
};
pub use families::{Coverage, Modular};
pub use hardness::{
    hardness_g, hardness_instance, random_hardness_instance, HardnessConstruction,
    HardnessInstance, HardnessItem, HardnessParams, HardnessRule,
};

use crate::error::Result;
use crate::scalar::Scalar;
use crate::set::{ItemId, ItemSet};

/// A set function over the ground set `[0, ground_size)`.
///
/// Implementations may assume every id in `set` is in range; the
/// [`ValueOracle`] wrapper checks that before calling.
pub trait SetFunction<V>: Send + Sync {
    fn ground_size(&self) -> usize;

    fn value(&self, set: &ItemSet) -> V;
}

/// The shipped function families.
#[derive(Clone, Debug)]
pub enum Family<V> {
    Modular(Modular<V>),
    Coverage(Coverage),
    Hardness(HardnessInstance),
}

impl<V: Scalar> SetFunction<V> for Family<V> {
    fn ground_size(&self) -> usize {
        match self {
            Family::Modular(m) => SetFunction::<V>::ground_size(m),
            Family::Coverage(c) => SetFunction::<V>::ground_size(c),
            Family::Hardness(h) => SetFunction::<V>::ground_size(h),
        }
    }

    fn value(&self, set: &ItemSet) -> V {
        match self {
            Family::Modular(m) => m.value(set),
            Family::Coverage(c) => c.value(set),
            Family::Hardness(h) => h.value(set),
        }
    }
}

impl<V> Family<V> {
    pub fn kind(&self) -> &'static str {
        match self {
            Family::Modular(_) => "modular",
            Family::Coverage(_) => "coverage",
            Family::Hardness(_) => "hardness",
        }
    }
}

/// Counts every evaluation of the wrapped set function.
///
/// The value side is pure; only the counter mutates, and it is atomic so a
/// shared oracle stays `Sync`. Clones start with a zeroed counter, which is
/// how the harness gives every trial its own count.
pub struct ValueOracle<V, F = Family<V>> {
    func: F,
    queries: AtomicU64,
    _value: PhantomData<fn() -> V>,
}

impl<V, F: Clone> Clone for ValueOracle<V, F> {
    fn clone(&self) -> Self {
        ValueOracle {
            func: self.func.clone(),
            queries: AtomicU64::new(0),
            _value: PhantomData,
        }
    }
}

impl<V, F: std::fmt::Debug> std::fmt::Debug for ValueOracle<V, F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ValueOracle")
            .field("func", &self.func)
            .field("queries", &self.queries.load(Ordering::Relaxed))
            .finish()
    }
}

impl<V: Scalar, F: SetFunction<V>> ValueOracle<V, F> {
    pub fn new(func: F) -> Self {
        ValueOracle {
            func,
            queries: AtomicU64::new(0),
            _value: PhantomData,
        }
    }

    pub fn function(&self) -> &F {
        &self.func
    }

    pub fn ground_size(&self) -> usize {
        self.func.ground_size()
    }

    /// `f(S)`, counted as one query.
    pub fn evaluate(&self, set: &ItemSet) -> Result<V> {
        set.check_within(self.ground_size())?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        Ok(self.func.value(set))
    }

    /// `f(S)` without touching the counter. For reporting only; algorithm
    /// code paths always go through [`evaluate`](Self::evaluate).
    pub fn peek(&self, set: &ItemSet) -> Result<V> {
        set.check_within(self.ground_size())?;
        Ok(self.func.value(set))
    }

    /// `Δ(x|S) = f(S+x) - f(S)`.
    ///
    /// Costs one query when `f(S)` is supplied, two otherwise, and none when
    /// `x` is already in `S`.
    pub fn marginal(&self, x: ItemId, set: &ItemSet, cached: Option<&V>) -> Result<V> {
        let n = self.ground_size();
        if x >= n {
            return Err(crate::Error::UnknownItem { item: x, n });
        }
        set.check_within(n)?;
        if set.contains(x) {
            return Ok(V::zero());
        }
        let base = match cached {
            Some(v) => v.clone(),
            None => self.evaluate(set)?,
        };
        Ok(self.evaluate(&set.with(x))? - base)
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_queries(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }
}

impl<V: Scalar> ValueOracle<V> {
    pub fn modular(weights: Vec<V>) -> Result<Self> {
        Ok(Self::new(Family::Modular(Modular::new(weights)?)))
    }

    pub fn coverage(sets: Vec<Vec<u32>>) -> Self {
        Self::new(Family::Coverage(Coverage::new(sets)))
    }

    pub fn hardness(instance: HardnessInstance) -> Self {
        Self::new(Family::Hardness(instance))
    }
}
