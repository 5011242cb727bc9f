//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point scalar (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// Absolute tolerance `base`, widened to a few ulps of `T` for low precision types.
#[inline]
pub fn tol<T: Real>(base: f64) -> T {
    let floor = T::epsilon() * lit(64.0);
    let base = lit::<T>(base);
    if base > floor {
        base
    } else {
        floor
    }
}

/// Lossy conversion used for error payloads and reports.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Sign with the convention `sgn(0) = +1`.
#[inline]
pub fn sgn<T: Real>(x: T) -> T {
    if x >= T::zero() {
        T::one()
    } else {
        -T::one()
    }
}

/// Square root of two.
#[inline]
pub fn sqrt2<T: Real>() -> T {
    T::SQRT_2()
}

/// Square root of three.
#[inline]
pub fn sqrt3<T: Real>() -> T {
    lit::<T>(3.0).sqrt()
}
