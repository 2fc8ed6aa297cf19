//! Scalar abstraction for the numerical core.
//!
//! All physics routines are generic over [`Real`], so the model can run in
//! `f32` or `f64`. Stated accuracies (for example the 1e-12 absolute error of
//! the Hurwitz zeta evaluation) are only meaningful at `f64`; narrower types
//! degrade gracefully to their own epsilon.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar usable by every routine in this crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless conversion from an `f64` constant.
    ///
    /// Panics only if the target type cannot represent any finite value of the
    /// constant's magnitude, which does not occur for the constants used here.
    fn from_f64_const(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }

    /// Conversion to `f64` for reporting and for the sampling layer.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
