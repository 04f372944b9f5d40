use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense item identifier in `[0, n)`.
pub type ItemId = usize;

/// Small sorted set of item ids.
///
/// Solutions, layers and swap removals hold at most a few dozen items, so a
/// sorted vector beats hashing and gives a deterministic iteration order. The
/// derived `Ord` is lexicographic on the sorted ids, which is the tie-break
/// order used for removal sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemSet(Vec<ItemId>);

impl ItemSet {
    pub fn new() -> Self {
        ItemSet(Vec::new())
    }

    pub fn singleton(x: ItemId) -> Self {
        ItemSet(vec![x])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[ItemId] {
        &self.0
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = ItemId> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, x: ItemId) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// Inserts `x`; returns false if it was already present.
    pub fn insert(&mut self, x: ItemId) -> bool {
        match self.0.binary_search(&x) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, x);
                true
            }
        }
    }

    pub fn remove(&mut self, x: ItemId) -> bool {
        match self.0.binary_search(&x) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// `self + x`
    pub fn with(&self, x: ItemId) -> Self {
        let mut out = self.clone();
        out.insert(x);
        out
    }

    /// `self + add - removed`
    pub fn swapped(&self, add: ItemId, removed: &ItemSet) -> Self {
        let mut out: Vec<ItemId> = self.iter().filter(|x| !removed.contains(*x)).collect();
        if let Err(pos) = out.binary_search(&add) {
            out.insert(pos, add);
        }
        ItemSet(out)
    }

    pub fn union(&self, other: &ItemSet) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        ItemSet(out)
    }

    pub fn filter(&self, mut keep: impl FnMut(ItemId) -> bool) -> Self {
        ItemSet(self.iter().filter(|&x| keep(x)).collect())
    }

    pub fn is_subset(&self, other: &ItemSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// Fails if any id is `>= n`.
    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&item) if item >= n => Err(Error::UnknownItem { item, n }),
            _ => Ok(()),
        }
    }

    /// Bitmask over the first 64 ids. Only meaningful when every id is < 64.
    pub fn to_mask(&self) -> u64 {
        self.iter().fold(0u64, |m, x| m | (1 << x))
    }

    pub fn from_mask(mask: u64) -> Self {
        ItemSet((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn into_vec(self) -> Vec<ItemId> {
        self.0
    }
}

impl FromIterator<ItemId> for ItemSet {
    fn from_iter<I: IntoIterator<Item = ItemId>>(iter: I) -> Self {
        let mut v: Vec<ItemId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ItemSet(v)
    }
}

impl From<Vec<ItemId>> for ItemSet {
    fn from(v: Vec<ItemId>) -> Self {
        v.into_iter().collect()
    }
}

impl<const N: usize> From<[ItemId; N]> for ItemSet {
    fn from(v: [ItemId; N]) -> Self {
        v.into_iter().collect()
    }
}
