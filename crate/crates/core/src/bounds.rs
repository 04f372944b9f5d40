//! Closed-form guarantees and shortlist size caps. Logs are natural.

use serde::Serialize;

/// A chain of lower bounds on `E[f(S)] / OPT`, from tightest to loosest.
///
/// `floor` is `target` with `ε` doubled. `success` is the probability factor
/// the guarantee is conditioned on; it defaults to `1 − ε`, and
/// [`scaled`](Self::scaled) applies it to the recursion bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub q: f64,
    pub epsilon: f64,
    pub recursion: f64,
    pub exponential: f64,
    pub floor: f64,
    pub target: f64,
    pub success: f64,
}

impl BoundReport {
    pub fn with_success(mut self, success: f64) -> Self {
        self.success = success;
        self
    }

    pub fn scaled(&self) -> f64 {
        self.recursion * self.success
    }
}

/// `q = 1 − (1 − 1/(kβ))^k`, the chance a fixed size-k set meets a given
/// slot of `kβ`.
pub fn slot_hit_probability(k: usize, beta: usize) -> f64 {
    let kb = (k * beta) as f64;
    1.0 - (1.0 - 1.0 / kb).powi(k as i32)
}

fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Cardinality chain `1 − (1 − q/k)^{kβ} ≥ 1 − e^{−qβ} ≥ 1 − e^{−1} − 2ε`
/// with `ε = 1/β`, plus the target `1 − 1/e − ε`.
pub fn bound_cardinality(k: usize, beta: usize) -> BoundReport {
    assert!(k >= 1 && beta >= 1, "k and beta must be positive");
    let q = slot_hit_probability(k, beta);
    let (kf, bf) = (k as f64, beta as f64);
    let eps = 1.0 / bf;
    BoundReport {
        q,
        epsilon: eps,
        recursion: clamp01(1.0 - (1.0 - q / kf).powf(kf * bf)),
        exponential: clamp01(1.0 - (-q * bf).exp()),
        floor: clamp01(1.0 - (-1.0f64).exp() - 2.0 * eps),
        target: clamp01(1.0 - (-1.0f64).exp() - eps),
        success: 1.0 - eps,
    }
}

/// Matroid chain `½(1 − (1 − 2q/k)^{kβ}) ≥ ½(1 − e^{−2qβ}) ≥ ½(1 − e^{−2} − 2ε)`
/// with `ε = 1/β`, plus the target `½(1 − e^{−2} − ε)`.
pub fn bound_matroid(k: usize, beta: usize) -> BoundReport {
    assert!(k >= 1 && beta >= 1, "k and beta must be positive");
    let q = slot_hit_probability(k, beta);
    let (kf, bf) = (k as f64, beta as f64);
    let eps = 1.0 / bf;
    let shrink = (1.0 - 2.0 * q / kf).max(0.0);
    BoundReport {
        q,
        epsilon: eps,
        recursion: clamp01(0.5 * (1.0 - shrink.powf(kf * bf))),
        exponential: clamp01(0.5 * (1.0 - (-2.0 * q * bf).exp())),
        floor: clamp01(0.5 * (1.0 - (-2.0f64).exp() - 2.0 * eps)),
        target: clamp01(0.5 * (1.0 - (-2.0f64).exp() - eps)),
        success: 1.0 - eps,
    }
}

/// `(1 − e^{−(p+1)} − ε) / (p + 1)`, clamped at 0.
pub fn bound_matchoid(p: usize, eps: f64) -> f64 {
    assert!(p >= 1, "p must be positive");
    let p1 = (p + 1) as f64;
    clamp01((1.0 - (-p1).exp() - eps) / p1)
}

/// Worst-case shortlist sizes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShortlistCaps {
    /// `16k·√(α ln(1/ε))·β·ln(2/ε)`.
    pub cardinality: f64,
    /// `4kβ·ln(2/ε)`.
    pub matroid: f64,
}

pub fn shortlist_caps(k: usize, alpha: usize, beta: usize, eps: f64) -> ShortlistCaps {
    let (kf, af, bf) = (k as f64, alpha as f64, beta as f64);
    let log_two = (2.0 / eps).ln();
    ShortlistCaps {
        cardinality: 16.0 * kf * (af * (1.0 / eps).ln()).max(0.0).sqrt() * bf * log_two,
        matroid: 4.0 * kf * bf * log_two,
    }
}
