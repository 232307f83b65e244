//! Scalar abstraction for the real-valued parts of the library.
//!
//! Tuple counts are always exact integers. Thresholds such as `√n / log⁴ n`,
//! concentration bounds and the log-binomial audits are real numbers, and
//! those are written against [`Real`] so they run in `f32` or `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar usable by thresholds, bounds and reports.
///
/// Blanket-implemented for every type meeting the bounds (in practice `f32`
/// and `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal. Never fails for finite inputs.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Converts an exact count.
    #[inline]
    fn count(c: u64) -> Self {
        Self::from_u64(c).expect("count fits the scalar range")
    }

    /// Converts a size or index.
    #[inline]
    fn size(c: usize) -> Self {
        Self::from_usize(c).expect("size fits the scalar range")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + Serialize
        + DeserializeOwned
        + 'static
{
}

/// Smallest integer `k` with `k ≥ x` (for required subset sizes).
pub fn ceil_size<R: Real>(x: R) -> usize {
    if x <= R::zero() {
        0
    } else {
        x.ceil().to_usize().unwrap_or(usize::MAX)
    }
}

/// Largest integer `k` with `k ≤ x` (for upper limits of sums over sizes).
pub fn floor_size<R: Real>(x: R) -> usize {
    if x <= R::zero() {
        0
    } else {
        x.floor().to_usize().unwrap_or(usize::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_helpers() {
        assert_eq!(ceil_size(5.333_f64), 6);
        assert_eq!(ceil_size(6.0_f64), 6);
        assert_eq!(ceil_size(-1.0_f32), 0);
        assert_eq!(floor_size(28.44_f64), 28);
        assert_eq!(floor_size(0.2_f32), 0);
    }

    #[test]
    fn conversions_round_trip() {
        assert_eq!(f32::count(17), 17.0);
        assert_eq!(f64::size(3), 3.0);
        assert_eq!(f64::lit(0.5).as_f64(), 0.5);
    }
}
