//! Scalar abstraction shared by the symbolic and numeric layers.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar used throughout the crate: `f32` or `f64`.
///
/// Each implementation carries the tolerances used by [`TermSum`](crate::TermSum)
/// canonicalisation, scaled to the precision of the type.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Two half-frequencies closer than this are treated as the same key.
    const MERGE_TOL: Self;
    /// Amplitudes with magnitude below this are dropped.
    const DROP_TOL: Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from an integer ladder shift or frequency offset.
    #[inline]
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable")
    }
}

impl Real for f64 {
    const MERGE_TOL: f64 = 1e-12;
    const DROP_TOL: f64 = 1e-14;
}

impl Real for f32 {
    const MERGE_TOL: f32 = 1e-4;
    const DROP_TOL: f32 = 1e-7;
}

/// `i` in the complex type over `T`.
#[inline]
pub(crate) fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// Real number lifted into the complex type.
#[inline]
pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
