//! Select-if-it-improves secretary with a bounded number of selections.
//!
//! Over a stream of `N` keys in random order, skip the first `u − 1`
//! arrivals and then select every key that beats everything seen so far,
//! up to `L_max` selections. The last selection is the stream maximum with
//! probability at least `1 − δ`.

use crate::error::{Error, Result};

/// What happened to one observed key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observation {
    /// Not above the running maximum.
    Ignored,
    /// New running maximum, but inside the warm-up or over the cap.
    Improved,
    /// New running maximum, added to the selection list.
    Selected,
}

#[derive(Clone, Debug)]
pub struct OnlineMax<K> {
    len: usize,
    delta: f64,
    warmup: usize,
    cap: usize,
    position: usize,
    best: Option<K>,
    warm: Option<K>,
    selected: Vec<(usize, K)>,
}

impl<K: PartialOrd + Clone> OnlineMax<K> {
    /// State for a stream of `len` keys with failure probability `delta`.
    /// `u = ⌈len·δ/2⌉` and `L_max = ⌈4 ln(2/δ)⌉`.
    pub fn new(len: usize, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::config(format!("delta must lie in (0, 1), got {delta}")));
        }
        Ok(OnlineMax {
            len,
            delta,
            warmup: ceil_tolerant(len as f64 * delta / 2.0),
            cap: ceil_tolerant(4.0 * (2.0 / delta).ln()),
            position: 0,
            best: None,
            warm: None,
            selected: Vec::new(),
        })
    }

    /// Seeds the running maximum before the first arrival. The seed is the
    /// result at index 0 if nothing is selected, and it never uses up a
    /// selection.
    pub fn warm_start(&mut self, key: K) -> Result<()> {
        if self.position > 0 {
            return Err(Error::contract("warm start after the first observation"));
        }
        self.best = Some(key.clone());
        self.warm = Some(key);
        Ok(())
    }

    /// Feeds the next key.
    pub fn observe(&mut self, key: K) -> Result<Observation> {
        let index = self.advance()?;
        // a key that is not strictly larger, or incomparable, is ignored
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if self.best.as_ref().is_some_and(|m| !(key > *m)) {
            return Ok(Observation::Ignored);
        }
        self.best = Some(key.clone());
        if index >= self.warmup && self.selected.len() < self.cap {
            self.selected.push((index, key));
            Ok(Observation::Selected)
        } else {
            Ok(Observation::Improved)
        }
    }

    /// Consumes an arrival that has no admissible key.
    pub fn skip(&mut self) -> Result<()> {
        self.advance().map(|_| ())
    }

    fn advance(&mut self) -> Result<usize> {
        if self.position >= self.len {
            return Err(Error::contract(format!(
                "online max announced {} arrivals, got more",
                self.len
            )));
        }
        self.position += 1;
        Ok(self.position)
    }

    /// Last selection, else the warm start at index 0, else nothing.
    pub fn result(&self) -> Option<(usize, &K)> {
        match self.selected.last() {
            Some((i, k)) => Some((*i, k)),
            None => self.warm.as_ref().map(|k| (0, k)),
        }
    }

    /// Running maximum over the warm start and every arrival so far.
    pub fn leader(&self) -> Option<&K> {
        self.best.as_ref()
    }

    /// Selected `(index, key)` pairs, increasing in both.
    pub fn selected(&self) -> &[(usize, K)] {
        &self.selected
    }

    /// Warm-up index `u`; arrivals with 1-based index `≥ u` can be selected.
    pub fn warmup(&self) -> usize {
        self.warmup
    }

    /// Selection cap `L_max`.
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn observed(&self) -> usize {
        self.position
    }
}

/// Ceiling that ignores floating error just above an integer.
pub(crate) fn ceil_tolerant(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}
