//! Scalar abstraction for the simulator's real-valued quantities.
//!
//! Ball position, ball velocity, paddle position and the speed/angle config
//! knobs are generic over [`Scalar`]. Geometry that the game defines on an
//! integer grid (walls, bricks, paddle size) stays integral and is lifted into
//! the scalar type where the physics needs it.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Number of fractional digits every real is quantized to, and printed with,
/// in exported state documents.
pub const DECIMAL_DIGITS: usize = 9;

const QUANTUM_INV: f64 = 1e9;

/// Floating point type the simulator can run on: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Snaps `self` onto the 1e-9 decimal grid used by the state document.
    ///
    /// The simulator applies this after every frame so that a state printed
    /// with [`DECIMAL_DIGITS`] digits and parsed back is bit-identical.
    fn quantize(self) -> Self;

    fn from_f64_lossy(v: f64) -> Self;

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    fn lit(v: f64) -> Self {
        Self::from_f64_lossy(v)
    }

    fn units(v: u32) -> Self {
        Self::from_f64_lossy(f64::from(v))
    }
}

#[inline]
fn snap64(v: f64) -> f64 {
    (v * QUANTUM_INV).round() / QUANTUM_INV
}

impl Scalar for f64 {
    #[inline]
    fn quantize(self) -> Self {
        // -0.0 prints as "-0.000000000"; fold it so equal states print equally.
        snap64(self) + 0.0
    }

    #[inline]
    fn from_f64_lossy(v: f64) -> Self {
        v
    }
}

impl Scalar for f32 {
    #[inline]
    fn quantize(self) -> Self {
        (snap64(f64::from(self)) as f32) + 0.0
    }

    #[inline]
    fn from_f64_lossy(v: f64) -> Self {
        v as f32
    }
}

/// Canonical fixed-precision decimal rendering of a scalar.
pub fn format_decimal<T: Scalar>(v: T) -> String {
    format!("{:.*}", DECIMAL_DIGITS, v.as_f64() + 0.0)
}

/// Parses a decimal string produced by [`format_decimal`] (or hand-written).
pub fn parse_decimal<T: Scalar>(s: &str) -> Option<T> {
    let v: f64 = s.trim().parse().ok()?;
    v.is_finite().then(|| T::from_f64_lossy(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn negative_zero_prints_positive() {
        assert_eq!(format_decimal((-0.0f64).quantize()), "0.000000000");
        assert_eq!(format_decimal((-1e-12f64).quantize()), "0.000000000");
    }

    #[test]
    fn axis_values_print_exactly() {
        assert_eq!(format_decimal(2.0f64), "2.000000000");
        assert_eq!(format_decimal(-1.6f64.quantize()), "-1.600000000");
    }

    proptest! {
        #[test]
        fn quantized_f64_survives_text(v in -1.0e6f64..1.0e6) {
            let q = v.quantize();
            prop_assert_eq!(q.quantize().to_bits(), q.to_bits());
            let back: f64 = parse_decimal(&format_decimal(q)).unwrap();
            prop_assert_eq!(back.to_bits(), q.to_bits());
        }

        #[test]
        fn quantized_f32_survives_text(v in -1.0e4f32..1.0e4) {
            let q = v.quantize();
            prop_assert_eq!(q.quantize().to_bits(), q.to_bits());
            let back: f32 = parse_decimal(&format_decimal(q)).unwrap();
            prop_assert_eq!(back.to_bits(), q.to_bits());
        }
    }
}
