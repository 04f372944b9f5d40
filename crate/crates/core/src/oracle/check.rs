use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::set::{ItemId, ItemSet};

use super::{SetFunction, ValueOracle};

/// Largest ground set [`check_monotone_submodular`] will sweep.
pub const CHECK_LIMIT: usize = 16;

/// Default slack, relative to the largest value, that absorbs rounding in
/// float-valued functions.
pub const CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    /// `Δ(x|S) < 0`.
    Monotone,
    /// `Δ(x|S) < Δ(x|S+y)`.
    Submodular,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub set: ItemSet,
    pub x: ItemId,
    /// The extra item for submodularity witnesses.
    pub y: Option<ItemId>,
    pub before: f64,
    pub after: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub witness: Option<Violation>,
    pub sets_checked: usize,
}

/// Exhaustive monotonicity and submodularity sweep over every `(S, x, y)`.
///
/// All `2^n` values are read once through [`ValueOracle::peek`], so the
/// oracle's query counter is left alone. A violation must exceed
/// [`CHECK_TOLERANCE`] times the largest value.
pub fn check_monotone_submodular<V, F>(oracle: &ValueOracle<V, F>) -> Result<CheckReport>
where
    V: Scalar,
    F: SetFunction<V>,
{
    check_monotone_submodular_within(oracle, CHECK_TOLERANCE)
}

/// [`check_monotone_submodular`] with an explicit relative slack. Use `0.0`
/// for exact scalars.
pub fn check_monotone_submodular_within<V, F>(oracle: &ValueOracle<V, F>, rel_tol: f64) -> Result<CheckReport>
where
    V: Scalar,
    F: SetFunction<V>,
{
    if !(rel_tol >= 0.0 && rel_tol.is_finite()) {
        return Err(Error::config(format!("tolerance must be finite and non-negative, got {rel_tol}")));
    }
    let n = oracle.ground_size();
    if n > CHECK_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: CHECK_LIMIT,
        });
    }
    let total = 1usize << n;
    let values: Vec<V> = (0..total as u64)
        .map(|m| oracle.peek(&ItemSet::from_mask(m)))
        .collect::<Result<_>>()?;
    let gain = |m: usize, x: usize| values[m | 1 << x].clone() - values[m].clone();
    let scale = values.iter().map(|v| v.to_f64_lossy().abs()).fold(0.0, f64::max);
    let slack = V::from_f64(rel_tol * scale).unwrap_or_else(V::zero);
    let floor = V::zero() - slack.clone();
    for m in 0..total {
        for x in (0..n).filter(|&x| m >> x & 1 == 0) {
            let dx = gain(m, x);
            if dx < floor {
                return Ok(witness(ViolationKind::Monotone, m, x, None, &dx, &V::zero(), total));
            }
            for y in (0..n).filter(|&y| y != x && m >> y & 1 == 0) {
                let dxy = gain(m | 1 << y, x);
                if dxy > dx.clone() + slack.clone() {
                    return Ok(witness(ViolationKind::Submodular, m, x, Some(y), &dx, &dxy, total));
                }
            }
        }
    }
    Ok(CheckReport {
        ok: true,
        witness: None,
        sets_checked: total,
    })
}

fn witness<V: Scalar>(
    kind: ViolationKind,
    mask: usize,
    x: ItemId,
    y: Option<ItemId>,
    before: &V,
    after: &V,
    total: usize,
) -> CheckReport {
    CheckReport {
        ok: false,
        witness: Some(Violation {
            kind,
            set: ItemSet::from_mask(mask as u64),
            x,
            y,
            before: before.to_f64_lossy(),
            after: after.to_f64_lossy(),
        }),
        sets_checked: total,
    }
}
