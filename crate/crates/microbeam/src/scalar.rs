//! Scalar abstraction: the numeric kernels are generic over the working
//! floating-point type.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Floating point scalar the solvers run on: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Shorthand for converting an `f64` literal into the working scalar.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal conversion")
}

/// Complex number over the working scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c_real<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `f64` view of a scalar, for error payloads and diagnostics.
#[inline]
pub(crate) fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
