//! Scalar abstractions shared by the numerical kernels.

use std::fmt::{Debug, Display};

use num_complex::{Complex, Complex64};
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar used by the generic numerical code.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// Converts a double-precision complex constant into the working precision.
pub fn complex_lit<F: Real>(z: Complex64) -> Complex<F> {
    Complex::new(F::lit(z.re), F::lit(z.im))
}

pub fn to_c64<F: Real>(z: Complex<F>) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

pub fn is_finite<F: Real>(z: Complex<F>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle<F: Real>(theta: F) -> F {
    let two_pi = F::TAU();
    let mut t = theta % two_pi;
    if t > F::PI() {
        t = t - two_pi;
    } else if t <= -F::PI() {
        t = t + two_pi;
    }
    t
}
