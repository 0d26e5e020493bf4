//! Scalar abstraction for all network quantities.

use std::fmt::{Debug, Display};
use std::num::ParseFloatError;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar carrying bandwidths, delays, utilities, fitness and
/// probability values. Implemented for `f32` and `f64`.
///
/// RNG draws are always performed in `f64` and converted afterwards, so the
/// random byte stream of a seeded run does not depend on the scalar type.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + FromStr<Err = ParseFloatError>
    + Display
    + Debug
    + Default
    + serde::Serialize
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant or RNG draw into the scalar type.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to any Scalar")
    }

    /// Converts into `f64` for RNG-side arithmetic and reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_through_f64() {
        assert_eq!(f32::from_f64_lossy(0.5), 0.5f32);
        assert_eq!(f64::from_f64_lossy(0.5), 0.5f64);
        assert_eq!(1.25f32.to_f64_lossy(), 1.25f64);
    }
}
