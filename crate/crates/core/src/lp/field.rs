//! Scalar types the simplex can run over. Every operation is checked so the
//! 64-bit rational path can bail out on overflow instead of wrapping.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, FromPrimitive, ToPrimitive, Zero};

pub(crate) trait Field: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(r: &BigRational) -> Option<Self>;
    fn to_big(&self) -> BigRational;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
    fn is_nil(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    /// `self < o`, beyond tolerance for inexact fields.
    fn lt(&self, o: &Self) -> bool;
}

impl Field for Rational64 {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_big(r: &BigRational) -> Option<Self> {
        Some(Rational64::new_raw(r.numer().to_i64()?, r.denom().to_i64()?))
    }
    fn to_big(&self) -> BigRational {
        BigRational::new_raw(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn is_nil(&self) -> bool {
        *self.numer() == 0
    }
    fn is_pos(&self) -> bool {
        *self.numer() > 0
    }
    fn is_neg(&self) -> bool {
        *self.numer() < 0
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_big(r: &BigRational) -> Option<Self> {
        Some(r.clone())
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        num_traits::Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
}

const FLOAT_EPS: f64 = 1e-9;

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_big(r: &BigRational) -> Option<Self> {
        r.to_f64().filter(|v| v.is_finite())
    }
    fn to_big(&self) -> BigRational {
        let v = if self.abs() <= FLOAT_EPS { 0.0 } else { *self };
        BigRational::from_f64(v).unwrap_or_else(Zero::zero)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o).filter(|v| v.is_finite())
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o).filter(|v| v.is_finite())
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o).filter(|v| v.is_finite())
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o).filter(|v| v.is_finite())
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_nil(&self) -> bool {
        self.abs() <= FLOAT_EPS
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_EPS
    }
    fn lt(&self, o: &Self) -> bool {
        *self < *o - FLOAT_EPS
    }
}
