//! Random arrival orders and the slot/window schedule.
//!
//! `n` balls are thrown uniformly into `kβ` bins; bin loads are the slot
//! sizes `X_1..X_{kβ}`. The arrival order is cut into consecutive slots of
//! those sizes. Windows group `αβ` consecutive slots. Slot indices are
//! 1-based in the API and 0-based in serialized dumps.

use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::ItemId;

/// Largest slot count `kβ` a schedule may have.
pub const MAX_SLOTS: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    n: usize,
    k: usize,
    beta: usize,
    slot_sizes: Vec<usize>,
    offsets: Vec<usize>,
    alpha: Option<usize>,
    windows: Vec<Range<usize>>,
}

#[derive(Serialize, Deserialize)]
struct ScheduleDump {
    slot_sizes: Vec<usize>,
    windows: Vec<[usize; 2]>,
}

/// Balls-and-bins slot sizes for `n` items over `kβ` slots.
pub fn make_schedule<R: Rng + ?Sized>(n: usize, k: usize, beta: usize, rng: &mut R) -> Result<Schedule> {
    let slots = slot_count(k, beta)?;
    let mut sizes = vec![0usize; slots];
    for _ in 0..n {
        sizes[rng.gen_range(0..slots)] += 1;
    }
    Schedule::from_sizes(k, beta, sizes)
}

fn slot_count(k: usize, beta: usize) -> Result<usize> {
    if k == 0 || beta == 0 {
        return Err(Error::config("schedule needs k >= 1 and beta >= 1"));
    }
    match k.checked_mul(beta) {
        Some(s) if s <= MAX_SLOTS => Ok(s),
        _ => Err(Error::config(format!(
            "k*beta exceeds the slot limit {MAX_SLOTS}"
        ))),
    }
}

impl Schedule {
    /// Schedule with given slot sizes; `n` is their sum.
    pub fn from_sizes(k: usize, beta: usize, slot_sizes: Vec<usize>) -> Result<Schedule> {
        let slots = slot_count(k, beta)?;
        if slot_sizes.len() != slots {
            return Err(Error::config(format!(
                "expected {slots} slot sizes, got {}",
                slot_sizes.len()
            )));
        }
        let mut offsets = Vec::with_capacity(slots + 1);
        offsets.push(0);
        for s in &slot_sizes {
            offsets.push(offsets.last().unwrap() + s);
        }
        Ok(Schedule {
            n: *offsets.last().unwrap(),
            k,
            beta,
            slot_sizes,
            offsets,
            alpha: None,
            windows: Vec::new(),
        })
    }

    /// Groups slots into `⌊k/α⌋` windows of `αβ` slots. When `α ∤ k` the
    /// remaining `(k mod α)β` slots form a final short window.
    pub fn group_windows(mut self, alpha: usize) -> Result<Schedule> {
        if alpha == 0 || alpha > self.k {
            return Err(Error::config(format!(
                "alpha must lie in [1, k={}], got {alpha}",
                self.k
            )));
        }
        let width = alpha * self.beta;
        let total = self.slots();
        self.windows = (0..total)
            .step_by(width)
            .map(|lo| lo..(lo + width).min(total))
            .collect();
        self.alpha = Some(alpha);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn alpha(&self) -> Option<usize> {
        self.alpha
    }

    /// `kβ`.
    pub fn slots(&self) -> usize {
        self.slot_sizes.len()
    }

    pub fn slot_sizes(&self) -> &[usize] {
        &self.slot_sizes
    }

    /// Prefix sums of the slot sizes, `kβ + 1` entries starting at 0.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Windows as 1-based inclusive-exclusive slot ranges.
    pub fn windows(&self) -> impl ExactSizeIterator<Item = Range<usize>> + '_ {
        self.windows.iter().map(|w| w.start + 1..w.end + 1)
    }

    pub fn window_count(&self) -> usize {
        self.windows.len()
    }

    pub fn to_json(&self) -> String {
        let dump = ScheduleDump {
            slot_sizes: self.slot_sizes.clone(),
            windows: self.windows.iter().map(|w| [w.start, w.end]).collect(),
        };
        serde_json::to_string(&dump).expect("schedule serializes")
    }

    /// Rebuilds a dumped schedule. Window widths give `α`.
    pub fn from_json(json: &str, k: usize, beta: usize) -> Result<Schedule> {
        let dump: ScheduleDump = serde_json::from_str(json)?;
        let schedule = Schedule::from_sizes(k, beta, dump.slot_sizes)?;
        match dump.windows.first() {
            None => Ok(schedule),
            Some([lo, hi]) => {
                let width = hi - lo;
                if width == 0 || width % beta != 0 {
                    return Err(Error::Parse(format!("window width {width} is not a multiple of beta")));
                }
                let grouped = schedule.group_windows(width / beta)?;
                let expected: Vec<[usize; 2]> = grouped.windows.iter().map(|w| [w.start, w.end]).collect();
                if expected != dump.windows {
                    return Err(Error::Parse("window ranges do not match a uniform grouping".into()));
                }
                Ok(grouped)
            }
        }
    }
}

/// Arrival order and the slot of every item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    order: Vec<ItemId>,
    offsets: Vec<usize>,
    slot_of: Vec<usize>,
}

impl Configuration {
    /// Cuts a given arrival order at the schedule's offsets.
    pub fn from_order(order: Vec<ItemId>, schedule: &Schedule) -> Result<Configuration> {
        let n = order.len();
        if n != schedule.n() {
            return Err(Error::config(format!(
                "order has {n} items but the schedule places {}",
                schedule.n()
            )));
        }
        let mut slot_of = vec![0usize; n];
        let mut seen = vec![false; n];
        for (j, w) in schedule.offsets().windows(2).enumerate() {
            for &x in &order[w[0]..w[1]] {
                if x >= n || seen[x] {
                    return Err(Error::config("arrival order is not a permutation"));
                }
                seen[x] = true;
                slot_of[x] = j + 1;
            }
        }
        Ok(Configuration {
            order,
            offsets: schedule.offsets().to_vec(),
            slot_of,
        })
    }

    pub fn order(&self) -> &[ItemId] {
        &self.order
    }

    /// `Y_x`, the 1-based slot of item `x`.
    pub fn slot_of(&self, x: ItemId) -> Option<usize> {
        self.slot_of.get(x).copied()
    }

    pub fn slots(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// Uniformly random arrival order cut by `schedule`.
pub fn permute_stream<R: Rng + ?Sized>(schedule: &Schedule, rng: &mut R) -> Configuration {
    let mut order: Vec<ItemId> = (0..schedule.n()).collect();
    order.shuffle(rng);
    Configuration::from_order(order, schedule).expect("a shuffled range is a permutation")
}

/// Items of slot `j` (1-based) in arrival order.
pub fn slot_items(config: &Configuration, j: usize) -> Result<&[ItemId]> {
    if j == 0 || j > config.slots() {
        return Err(Error::config(format!(
            "slot index {j} outside [1, {}]",
            config.slots()
        )));
    }
    Ok(&config.order[config.offsets[j - 1]..config.offsets[j]])
}
