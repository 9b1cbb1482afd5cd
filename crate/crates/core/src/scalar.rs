//! Floating point scalar abstraction shared by the numeric modules.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real number type usable by modularity, layout and coverage computations.
///
/// Implemented for `f32` and `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for constants.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 constant representable in scalar type")
    }

    /// Conversion from a count.
    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("count representable in scalar type")
    }

    /// Smallest improvement treated as real progress by iterative optimizers.
    ///
    /// `1e-12`, raised to a few ULPs for types too coarse to resolve it.
    fn gain_threshold() -> Self {
        let floor = Self::epsilon() * Self::of(16.0);
        Self::of(1e-12).max(floor)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_is_fixed_for_f64() {
        assert_eq!(f64::gain_threshold(), 1e-12);
    }

    #[test]
    fn threshold_is_widened_for_f32() {
        assert!(f32::gain_threshold() > 1e-12);
        assert!(f32::gain_threshold() < 1e-5);
    }
}
