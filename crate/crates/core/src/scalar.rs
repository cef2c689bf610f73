use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One};

/// Numeric type risks and probabilities are computed in.
///
/// Rational implementations are exact. Floating-point implementations exist so
/// that Monte-Carlo style code can share the risk functions, and only use a
/// tolerance where exact equality is meaningless.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {
    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: u64, den: u64) -> Self;

    /// Whether a sum of weights counts as a total mass of one.
    fn is_unit(&self) -> bool;
}

impl Scalar for BigRational {
    fn from_ratio(num: u64, den: u64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_unit(&self) -> bool {
        self.is_one()
    }
}

impl Scalar for Ratio<i64> {
    fn from_ratio(num: u64, den: u64) -> Self {
        Ratio::new(num as i64, den as i64)
    }

    fn is_unit(&self) -> bool {
        self.is_one()
    }
}

impl Scalar for f64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn is_unit(&self) -> bool {
        (self - 1.0).abs() <= 1e-9
    }
}

impl Scalar for f32 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f32 / den as f32
    }

    fn is_unit(&self) -> bool {
        (self - 1.0).abs() <= 1e-5
    }
}

pub(crate) fn is_positive<T: Scalar>(x: &T) -> bool {
    *x > T::zero()
}
