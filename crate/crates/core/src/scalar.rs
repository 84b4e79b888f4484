//! Scalar abstraction shared by the analytic and the matrix code.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point scalar: `f32` or `f64`.
///
/// The closed-form laws, quadrature and transform solvers only need
/// [`Float`]. Matrix code additionally asks for [`LinalgScalar`].
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(k: usize) -> Self {
        <Self as FromPrimitive>::from_usize(k).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Real scalar usable as a nalgebra field.
pub trait LinalgScalar: Real + nalgebra::RealField + Copy {}

impl<T> LinalgScalar for T where T: Real + nalgebra::RealField + Copy {}
