//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar usable by the evaluators, integrators and checks.
///
/// Implemented for `f32` and `f64`. Expression constants are stored as `f64`
/// and narrowed with [`Scalar::of`].
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    /// Lossy widening used when values are recorded in reports.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Max-norm of a vector, `0` for an empty slice.
pub fn max_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
}

/// Max-norm of the difference of two equally sized vectors.
pub fn max_norm_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).abs()))
}

/// Absolute-plus-relative deviation `|a - b| / (1 + |reference|)`.
pub fn scaled_deviation<T: Scalar>(value: &[T], reference: &[T]) -> T {
    max_norm_diff(value, reference) / (T::one() + max_norm(reference))
}
