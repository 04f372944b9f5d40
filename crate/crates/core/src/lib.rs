//! Online shortlist algorithms for monotone submodular maximization on
//! randomly ordered streams.
//!
//! Items arrive one at a time in uniformly random order. An algorithm may
//! irrevocably copy items into a shortlist `R` and, once the stream ends,
//! returns a feasible subset of `R`. Three constraint families are covered:
//!
//! * cardinality (`|S| <= k`), via layered partial solutions per window,
//! * a single matroid, via a swap loop that evicts at most one item,
//! * a p-matchoid, via a swap loop that evicts at most `p` items.
//!
//! Every numeric routine is generic over a [`Scalar`] so the same code runs
//! on `f64`, `f32` or exact rationals. Aliases for the common instantiations
//! live at the crate root.

pub mod algorithms;
pub mod baselines;
pub mod bounds;
pub mod error;
pub mod independence;
pub mod instance;
pub mod online_max;
pub mod oracle;
pub mod scalar;
pub mod set;
pub mod stream;

pub use algorithms::{
    cardinality_secretary_run, finalize_cardinality, matchoid_secretary_run,
    matroid_secretary_run, range_u, AlgParams, RunCounters, RunDiagnostics, RunOptions,
    RunResult, TraceEvent,
};
pub use baselines::{exact_opt, greedy_cardinality, greedy_independence};
pub use bounds::{bound_cardinality, bound_matchoid, bound_matroid, shortlist_caps, BoundReport};
pub use error::{Error, Result};
pub use independence::{
    Constraint, IndependenceOracle, MatchoidSpec, MatroidKind, MatroidOracle, SwapOutcome,
};
pub use online_max::OnlineMax;
pub use oracle::{Family, SetFunction, ValueOracle};
pub use scalar::Scalar;
pub use set::{ItemId, ItemSet};
pub use stream::{Configuration, Schedule};

/// Exact rational scalar. Hardness values are dyadic, so they are exact here.
pub type Exact = num_rational::Ratio<i64>;

/// Value oracle over binary64 values.
pub type Oracle64 = ValueOracle<f64>;
/// Value oracle over binary32 values.
pub type Oracle32 = ValueOracle<f32>;
/// Value oracle over exact rationals.
pub type ExactOracle = ValueOracle<Exact>;

/// Run result over binary64 values.
pub type RunResult64 = RunResult<f64>;
/// Run result over exact rationals.
pub type ExactRunResult = RunResult<Exact>;

/// Online max keyed by `(value, tie-break)` over binary64 values.
pub type OnlineMax64 = OnlineMax<(f64, std::cmp::Reverse<ItemId>)>;
