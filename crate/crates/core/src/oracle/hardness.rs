//! Adversarial instance family for the random-order lower bound.
//!
//! Items are of type C (`c^1..c^L`) or type D. The D items form `L` disjoint
//! blocks `D^ℓ = {d^ℓ_1..d^ℓ_k}` plus filler. Instance `I_ℓ*` holds every D
//! item and the single special item `c^ℓ*`, so `T_ℓ* = {c^ℓ*} ∪ D^ℓ*` is the
//! unique best `(k+1)`-set.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::set::{ItemId, ItemSet};

use super::SetFunction;

/// Piecewise value rule for sets holding exactly one C item.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HardnessRule {
    /// `min{2k+1, N(d) + k − λ·off}` where `N(0)=0`, `N(d)=1+g(d−1)`,
    /// `d` counts D items, `off` counts D items outside the block of the C
    /// item and `λ` is a power of two small enough to keep `f` monotone.
    #[default]
    Repaired,
    /// `min{2k+1, k + g(|S|−1)/2 + k′/2^{i+1}}` with `k′ = |S ∩ D^ℓ|`,
    /// `i = ⌊(|S|−1)/k⌋` and the override `f(T_ℓ) = 2k`. Not submodular;
    /// kept for comparison.
    Published,
}

/// `g(t) = k + k/2 + … + k/2^{i−1} + (t − ik)/2^i` with `i = ⌊t/k⌋`, exactly.
pub fn hardness_g_exact(t: usize, k: usize) -> BigRational {
    assert!(k >= 1, "k must be positive");
    let i = t / k;
    let k_big = BigInt::from(k);
    let two = BigInt::from(2);
    let mut acc = BigRational::zero();
    let mut pow = BigInt::one();
    for _ in 0..i {
        acc += BigRational::new(k_big.clone(), pow.clone());
        pow *= &two;
    }
    acc + BigRational::new(BigInt::from(t - i * k), pow)
}

/// `g(t)` as a float.
pub fn hardness_g(t: usize, k: usize) -> f64 {
    hardness_g_exact(t, k).to_f64().unwrap_or(f64::NAN)
}

fn to_scalar<V: Scalar>(x: &BigRational) -> V {
    match (x.numer().to_i64(), x.denom().to_i64()) {
        (Some(n), Some(d)) => V::from_ratio(n, d),
        _ => {
            let f = x.to_f64().unwrap_or(f64::NAN);
            V::from_f64(f).expect("value representable as float")
        }
    }
}

/// Shape parameters. `l_star` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardnessParams {
    pub n: usize,
    pub k: usize,
    pub l_star: usize,
}

impl HardnessParams {
    pub fn new(n: usize, k: usize, l_star: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("hardness instance needs k >= 1"));
        }
        if n < 2 * k || !n.is_multiple_of(2 * k) {
            return Err(Error::config(format!(
                "hardness instance needs 2k | n and n >= 2k (n={n}, k={k})"
            )));
        }
        let p = HardnessParams { n, k, l_star };
        if l_star == 0 || l_star > p.blocks() {
            return Err(Error::config(format!(
                "l_star must lie in [1, {}], got {l_star}",
                p.blocks()
            )));
        }
        Ok(p)
    }

    /// `L = n / 2k`.
    pub fn blocks(&self) -> usize {
        self.n / (2 * self.k)
    }

    /// `|D′| = n − Lk − 1`.
    pub fn filler(&self) -> usize {
        self.n - self.blocks() * self.k - 1
    }
}

/// Role of one item in the construction. Block and item indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum HardnessItem {
    Special { block: usize },
    Block { block: usize, index: usize },
    Filler { index: usize },
}

impl HardnessItem {
    pub fn name(&self) -> String {
        match *self {
            HardnessItem::Special { block } => format!("c^{block}"),
            HardnessItem::Block { block, index } => format!("d^{block}_{index}"),
            HardnessItem::Filler { index } => format!("d'_{index}"),
        }
    }

    fn block(&self) -> Option<usize> {
        match *self {
            HardnessItem::Special { block } | HardnessItem::Block { block, .. } => Some(block),
            HardnessItem::Filler { .. } => None,
        }
    }
}

/// Summary counts of a set, enough to evaluate either rule.
struct Counts {
    size: usize,
    specials: usize,
    special_block: Option<usize>,
    d_total: usize,
    d_in_block: usize,
}

impl Counts {
    fn of(layout: &[HardnessItem], set: &ItemSet) -> Counts {
        let mut c = Counts {
            size: set.len(),
            specials: 0,
            special_block: None,
            d_total: 0,
            d_in_block: 0,
        };
        for x in set.iter() {
            if let HardnessItem::Special { block } = layout[x] {
                c.specials += 1;
                c.special_block = Some(block);
            }
        }
        for x in set.iter() {
            let item = layout[x];
            if matches!(item, HardnessItem::Special { .. }) {
                continue;
            }
            c.d_total += 1;
            if c.special_block.is_some() && item.block() == c.special_block {
                c.d_in_block += 1;
            }
        }
        c
    }
}

/// Smallest `m ≥ ⌊(n−3)/k⌋` with `2^{−m}(n−1−k) ≤ k`.
///
/// The first bound keeps every D marginal at least `λ`; the second keeps the
/// marginal of the C item non-negative.
fn lambda_exponent(n: usize, k: usize) -> u32 {
    let mut m = (n.saturating_sub(3) / k) as u32;
    let off_max = (n - 1).saturating_sub(k) as u128;
    while m < 127 && off_max > (k as u128) << m {
        m += 1;
    }
    m
}

fn evaluate(params: &HardnessParams, rule: HardnessRule, lambda_exp: u32, c: &Counts) -> BigRational {
    let k = params.k;
    let int = |v: usize| BigRational::from_integer(BigInt::from(v));
    if c.size == 0 {
        return BigRational::zero();
    }
    if c.specials >= 2 {
        return int(2 * k + 1);
    }
    if c.specials == 0 {
        return int(1) + hardness_g_exact(c.size - 1, k);
    }
    let cap = int(2 * k + 1);
    let value = match rule {
        HardnessRule::Repaired => {
            let base = if c.d_total == 0 {
                BigRational::zero()
            } else {
                int(1) + hardness_g_exact(c.d_total - 1, k)
            };
            let off = c.d_total - c.d_in_block;
            let lambda = BigRational::new(BigInt::one(), BigInt::one() << lambda_exp);
            base + int(k) - lambda * int(off)
        }
        HardnessRule::Published => {
            if c.d_in_block == k && c.d_total == k {
                return int(2 * k);
            }
            let t = c.size - 1;
            let i = t / k;
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            int(k)
                + half * hardness_g_exact(t, k)
                + BigRational::new(BigInt::from(c.d_in_block), BigInt::one() << (i + 1))
        }
    };
    if value > cap {
        cap
    } else {
        value
    }
}

/// One instance `I_ℓ*`: `n` items, id 0 is `c^ℓ*`, then the blocks
/// `D^1..D^L` in order, then the filler.
#[derive(Clone, Debug, PartialEq)]
pub struct HardnessInstance {
    params: HardnessParams,
    rule: HardnessRule,
    layout: Vec<HardnessItem>,
    lambda_exp: u32,
}

impl HardnessInstance {
    pub fn new(params: HardnessParams, rule: HardnessRule) -> Self {
        let HardnessParams { n, k, l_star } = params;
        let mut layout = Vec::with_capacity(n);
        layout.push(HardnessItem::Special { block: l_star });
        for block in 1..=params.blocks() {
            for index in 1..=k {
                layout.push(HardnessItem::Block { block, index });
            }
        }
        for index in 1..=params.filler() {
            layout.push(HardnessItem::Filler { index });
        }
        debug_assert_eq!(layout.len(), n);
        HardnessInstance {
            params,
            rule,
            layout,
            lambda_exp: lambda_exponent(n, k),
        }
    }

    pub fn params(&self) -> &HardnessParams {
        &self.params
    }

    pub fn rule(&self) -> HardnessRule {
        self.rule
    }

    /// Id-to-role table.
    pub fn layout(&self) -> &[HardnessItem] {
        &self.layout
    }

    pub fn special_item(&self) -> ItemId {
        0
    }

    /// Ids of `T_ℓ* = {c^ℓ*} ∪ D^ℓ*`.
    pub fn target_set(&self) -> ItemSet {
        let k = self.params.k;
        let first = 1 + (self.params.l_star - 1) * k;
        std::iter::once(0).chain(first..first + k).collect()
    }

    pub fn value_exact(&self, set: &ItemSet) -> BigRational {
        let counts = Counts::of(&self.layout, set);
        evaluate(&self.params, self.rule, self.lambda_exp, &counts)
    }
}

impl<V: Scalar> SetFunction<V> for HardnessInstance {
    fn ground_size(&self) -> usize {
        self.layout.len()
    }

    fn value(&self, set: &ItemSet) -> V {
        to_scalar(&self.value_exact(set))
    }
}

/// Instance `I_ℓ*` under the default rule.
pub fn hardness_instance(n: usize, k: usize, l_star: usize) -> Result<HardnessInstance> {
    Ok(HardnessInstance::new(
        HardnessParams::new(n, k, l_star)?,
        HardnessRule::default(),
    ))
}

/// Instance with `ℓ*` drawn uniformly from `[1, L]`.
pub fn random_hardness_instance<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<HardnessInstance> {
    let blocks = HardnessParams::new(n, k, 1)?.blocks();
    hardness_instance(n, k, rng.gen_range(1..=blocks))
}

/// The whole construction: all `L` special items and all `n − 1` D items.
/// Sets with two special items only occur here, never inside an instance.
#[derive(Clone, Debug)]
pub struct HardnessConstruction {
    n: usize,
    k: usize,
    rule: HardnessRule,
    layout: Vec<HardnessItem>,
}

impl HardnessConstruction {
    pub fn new(n: usize, k: usize, rule: HardnessRule) -> Result<Self> {
        let params = HardnessParams::new(n, k, 1)?;
        let mut layout: Vec<HardnessItem> = (1..=params.blocks())
            .map(|block| HardnessItem::Special { block })
            .collect();
        layout.extend(HardnessInstance::new(params, rule).layout[1..].iter().copied());
        Ok(HardnessConstruction { n, k, rule, layout })
    }

    pub fn layout(&self) -> &[HardnessItem] {
        &self.layout
    }

    pub fn id_of(&self, item: HardnessItem) -> Option<ItemId> {
        self.layout.iter().position(|x| *x == item)
    }

    pub fn value_exact(&self, set: &ItemSet) -> BigRational {
        let params = HardnessParams {
            n: self.n,
            k: self.k,
            l_star: 1,
        };
        let counts = Counts::of(&self.layout, set);
        evaluate(&params, self.rule, lambda_exponent(self.n, self.k), &counts)
    }
}

impl<V: Scalar> SetFunction<V> for HardnessConstruction {
    fn ground_size(&self) -> usize {
        self.layout.len()
    }

    fn value(&self, set: &ItemSet) -> V {
        to_scalar(&self.value_exact(set))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;
    use rand::SeedableRng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn g_examples() {
        assert_eq!(hardness_g(2, 2), 2.0);
        assert_eq!(hardness_g(0, 2), 0.0);
        assert_eq!(hardness_g(3, 2), 2.5);
        assert_eq!(hardness_g_exact(7, 3), rat(3, 1) + rat(3, 2) + rat(1, 4));
    }

    #[test]
    fn g_increments_halve_per_block() {
        for k in 1..5 {
            for t in 0..6 * k {
                let step = hardness_g_exact(t + k, k) - hardness_g_exact(t, k);
                let next = hardness_g_exact(t + 2 * k, k) - hardness_g_exact(t + k, k);
                assert!(step >= BigRational::zero());
                assert!(next <= step);
            }
            assert_eq!(hardness_g_exact(k, k), rat(k as i64, 1));
        }
    }

    #[test]
    fn instance_shape() {
        let inst = hardness_instance(4, 1, 2).unwrap();
        assert_eq!(inst.params().blocks(), 2);
        assert_eq!(SetFunction::<f64>::ground_size(&inst), 4);
        assert_eq!(inst.layout()[0], HardnessItem::Special { block: 2 });
        assert_eq!(inst.target_set(), ItemSet::from([0, 2]));

        let inst = hardness_instance(8, 2, 1).unwrap();
        let names: Vec<String> = inst.layout().iter().map(|x| x.name()).collect();
        assert_eq!(
            names,
            ["c^1", "d^1_1", "d^1_2", "d^2_1", "d^2_2", "d'_1", "d'_2", "d'_3"]
        );
    }

    #[test]
    fn bad_shapes_rejected() {
        assert!(hardness_instance(6, 2, 1).is_err());
        assert!(hardness_instance(2, 2, 1).is_err());
        assert!(hardness_instance(8, 2, 3).is_err());
        assert!(hardness_instance(8, 2, 0).is_err());
        assert!(hardness_instance(8, 0, 1).is_err());
    }

    #[test]
    fn pinned_values() {
        for rule in [HardnessRule::Repaired, HardnessRule::Published] {
            let inst = HardnessInstance::new(HardnessParams::new(8, 2, 1).unwrap(), rule);
            let f = |s: &[ItemId]| -> Exact { inst.value(&s.iter().copied().collect()) };
            assert_eq!(f(&[]), Exact::from_integer(0));
            assert_eq!(f(&[0]), Exact::from_integer(2));
            assert_eq!(f(&[3]), Exact::from_integer(1));
            assert_eq!(f(&[0, 1, 2]), Exact::from_integer(4));
            assert_eq!(f(&[3, 5, 6]), Exact::from_integer(3));
        }
    }

    #[test]
    fn two_specials_saturate() {
        let con = HardnessConstruction::new(8, 2, HardnessRule::Repaired).unwrap();
        assert_eq!(con.layout().len(), 2 + 7);
        let c1 = con.id_of(HardnessItem::Special { block: 1 }).unwrap();
        let c2 = con.id_of(HardnessItem::Special { block: 2 }).unwrap();
        assert_eq!(SetFunction::<f64>::value(&con, &ItemSet::from([c1, c2])), 5.0);
        let t2: ItemSet = [c2]
            .into_iter()
            .chain((1..=2).map(|i| con.id_of(HardnessItem::Block { block: 2, index: i }).unwrap()))
            .collect();
        assert_eq!(SetFunction::<f64>::value(&con, &t2), 4.0);
    }

    #[test]
    fn small_sets_stay_below_2k() {
        for (n, k) in [(8, 2), (12, 3), (12, 2), (4, 1)] {
            let inst = hardness_instance(n, k, 1).unwrap();
            let bound = BigRational::from_integer((2 * k).into());
            for mask in 0u64..(1 << n) {
                let s = ItemSet::from_mask(mask);
                if s.len() <= k + 1 {
                    assert!(inst.value_exact(&s) <= bound, "n={n} k={k} {s:?}");
                }
            }
        }
    }

    #[test]
    fn lambda_keeps_special_marginal_nonnegative() {
        for (n, k) in [(8, 2), (40, 2), (100, 1), (1000, 10)] {
            let m = lambda_exponent(n, k);
            assert!(((n - 1 - k) as f64) * 0.5f64.powi(m as i32) <= k as f64);
            assert!(m as usize >= (n - 3) / k);
        }
    }

    #[test]
    fn large_instance_converts_to_float() {
        let inst = hardness_instance(1000, 10, 7).unwrap();
        let all: ItemSet = (0..1000).collect();
        let v: f64 = inst.value(&all);
        assert_eq!(v, 21.0);
    }

    #[test]
    fn random_instance_draws_valid_block() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let inst = random_hardness_instance(24, 2, &mut rng).unwrap();
            assert!((1..=6).contains(&inst.params().l_star));
        }
    }
}
