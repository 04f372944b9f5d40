use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Numeric type for set-function values.
///
/// Only ring operations and a total order on the values actually produced are
/// needed, so floats and exact rationals both qualify.
pub trait Scalar:
    Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    /// `numer / denom` in this scalar type.
    fn from_ratio(numer: i64, denom: i64) -> Self {
        let n = Self::from_i64(numer).expect("integer numerator representable");
        let d = Self::from_i64(denom).expect("integer denominator representable");
        n / d
    }

    fn from_count(count: usize) -> Self {
        Self::from_usize(count).expect("count representable")
    }

    /// Lossy conversion for reporting.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
}
