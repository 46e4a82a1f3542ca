//! Scalar abstraction for the numeric layer.

use nalgebra::RealField;
use num_traits::FromPrimitive;

/// Real base field for all floating-point work: `f32` or `f64`.
///
/// Complex arithmetic uses `num_complex::Complex<T>`, which nalgebra
/// accepts as a `ComplexField` whenever `T: RealField`.
pub trait Real: RealField + FromPrimitive + Copy {
    /// Lossy conversion from an `f64` constant (tolerances, literals).
    fn from_config(x: f64) -> Self {
        Self::from_f64(x).expect("finite constant")
    }

    /// Conversion back to `f64` for reporting.
    fn to_f64(self) -> f64;
}

impl Real for f32 {
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn to_f64(self) -> f64 {
        self
    }
}
