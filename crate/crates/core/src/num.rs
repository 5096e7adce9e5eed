//! Scalar abstraction for metric arithmetic.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point type metrics are reported in.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// `100 * num / den` rounded half-up to one decimal, computed on integers
/// so that printed values never depend on float representation.
pub fn percent_tenths(num: u64, den: u64) -> Option<u64> {
    if den == 0 {
        return None;
    }
    let (num, den) = (u128::from(num), u128::from(den));
    Some(((2000 * num + den) / (2 * den)) as u64)
}

/// Rounds half-up to one decimal. Values a few ulps below a half step are
/// treated as sitting on it, since decimal inputs rarely survive the trip
/// through binary floats exactly.
pub fn round_tenths<T: Scalar>(x: T) -> T {
    let ten = T::from_u8(10).unwrap();
    let half = T::from_f64(0.5).unwrap();
    let scaled = x * ten;
    let slack = T::epsilon() * scaled.abs().max(T::one()) * T::from_u8(64).unwrap();
    (scaled + half + slack).floor() / ten
}

pub fn from_tenths<T: Scalar>(tenths: u64) -> T {
    T::from_u64(tenths).unwrap() / T::from_u8(10).unwrap()
}
