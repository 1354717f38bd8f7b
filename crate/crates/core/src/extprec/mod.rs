//! Double-double ("compensated") real arithmetic.
//!
//! An [`ExtReal`] is the unevaluated sum `hi + lo` of two binary64 values with
//! `|lo| <= ulp(hi)/2`, giving roughly 106 significand bits. Products use the
//! hardware FMA for the exact error term.
//!
//! The trigonometric entry points take their argument in units of π
//! (`sin_pi(x) = sin(πx)`), so that reduction modulo 2 is exact and no
//! multi-word approximation of π is ever subtracted from a large argument.

mod decimal;
mod trig;

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

pub use decimal::ParseExtRealError;

/// Unit roundoff of the double-double format, `2^-106`.
pub const DD_EPS: f64 = 1.232_595_164_407_831e-32;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtPrecError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of negative value {0:e}")]
    NegativeSqrt(f64),
}

#[derive(Clone, Copy, Default, PartialEq)]
pub struct ExtReal {
    hi: f64,
    lo: f64,
}

#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

// requires |a| >= |b| or a == 0
#[inline]
pub(crate) fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal { hi: 0.0, lo: 0.0 };
    pub const ONE: ExtReal = ExtReal { hi: 1.0, lo: 0.0 };
    pub const PI: ExtReal = ExtReal {
        hi: f64::from_bits(0x400921fb54442d18),
        lo: f64::from_bits(0x3ca1a62633145c07),
    };

    /// Builds a renormalized value from an arbitrary pair of doubles.
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        ExtReal { hi: h, lo: l }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        ExtReal { hi: x, lo: 0.0 }
    }

    /// Exact for every `i64`.
    pub fn from_i64(i: i64) -> Self {
        let hi = i as f64;
        // the rounding residue of a 64-bit integer always fits in a double
        let lo = (i as i128 - hi as i128) as f64;
        ExtReal::new(hi, lo)
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `self * s` for a binary64 `s`.
    #[inline]
    pub fn mul_f64(self, s: f64) -> Self {
        let (p, e) = two_prod(self.hi, s);
        let e = self.lo.mul_add(s, e);
        let (h, l) = fast_two_sum(p, e);
        ExtReal { hi: h, lo: l }
    }

    #[inline]
    pub fn add_f64(self, s: f64) -> Self {
        let (h, e) = two_sum(self.hi, s);
        let e = e + self.lo;
        let (h, l) = two_sum(h, e);
        ExtReal { hi: h, lo: l }
    }

    #[inline]
    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn recip(self) -> Self {
        ExtReal::ONE / self
    }

    pub fn try_div(self, rhs: Self) -> Result<Self, ExtPrecError> {
        if rhs.is_zero() {
            Err(ExtPrecError::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }

    /// Square root; NaN for negative input.
    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                ExtReal::ZERO
            } else {
                ExtReal::from_f64(f64::NAN)
            };
        }
        // one Newton correction on the binary64 root
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let resid = (self - ExtReal { hi: p, lo: e }).to_f64();
        let (h, l) = fast_two_sum(x, resid / (2.0 * x));
        ExtReal { hi: h, lo: l }
    }

    pub fn try_sqrt(self) -> Result<Self, ExtPrecError> {
        if self.is_sign_negative() && !self.is_zero() {
            Err(ExtPrecError::NegativeSqrt(self.to_f64()))
        } else {
            Ok(self.sqrt())
        }
    }

    /// `sin(π·self)`.
    pub fn sin_pi(self) -> Self {
        trig::sincos_pi(self).0
    }

    /// `cos(π·self)`.
    pub fn cos_pi(self) -> Self {
        trig::sincos_pi(self).1
    }

    /// `(sin(π·self), cos(π·self))` sharing one argument reduction.
    pub fn sincos_pi(self) -> (Self, Self) {
        trig::sincos_pi(self)
    }

    /// `self - round(self)`, computed exactly; lies in `[-1/2, 1/2]`.
    pub fn frac_centered(self) -> Self {
        trig::reduce_mod(self, 1.0)
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtReal({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(34).max(1);
        f.write_str(&self.to_sci_string(digits))
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal::from_f64(x)
    }
}

impl From<i64> for ExtReal {
    fn from(i: i64) -> Self {
        ExtReal::from_i64(i)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl Neg for ExtReal {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        ExtReal {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for ExtReal {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let e = e + t;
        let (s, e) = fast_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = fast_two_sum(s, e);
        ExtReal { hi, lo }
    }
}

impl Sub for ExtReal {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for ExtReal {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        // operands ordered by magnitude first: the product is commutative
        // bit-for-bit and odd in each factor
        let key = |x: Self| {
            (
                x.hi.abs().to_bits(),
                x.lo.abs().to_bits(),
                x.hi.to_bits(),
                x.lo.to_bits(),
            )
        };
        let (a, b) = if key(self) <= key(rhs) {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let (ch, cl1) = two_prod(a.hi, b.hi);
        let tl0 = a.lo * b.lo;
        let tl1 = a.hi.mul_add(b.lo, tl0);
        let cl2 = a.lo.mul_add(b.hi, tl1);
        let cl3 = cl1 + cl2;
        let (hi, lo) = fast_two_sum(ch, cl3);
        ExtReal { hi, lo }
    }
}

impl Div for ExtReal {
    type Output = Self;
    /// Three-step long division; division by zero follows IEEE semantics on
    /// the leading term.
    fn div(self, rhs: Self) -> Self {
        if rhs.is_zero() {
            return ExtReal::from_f64(self.hi / rhs.hi);
        }
        let q1 = self.hi / rhs.hi;
        let r = self - rhs.mul_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (h, l) = fast_two_sum(q1, q2);
        ExtReal { hi: h, lo: l }.add_f64(q3)
    }
}

impl Add<f64> for ExtReal {
    type Output = Self;
    fn add(self, rhs: f64) -> Self {
        self.add_f64(rhs)
    }
}

impl Sub<f64> for ExtReal {
    type Output = Self;
    fn sub(self, rhs: f64) -> Self {
        self.add_f64(-rhs)
    }
}

impl Mul<f64> for ExtReal {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.mul_f64(rhs)
    }
}

impl Div<f64> for ExtReal {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self / ExtReal::from_f64(rhs)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for ExtReal {
            #[inline]
            fn $m(&mut self, rhs: Self) { *self = *self $op rhs; }
        }
        impl $tr<f64> for ExtReal {
            #[inline]
            fn $m(&mut self, rhs: f64) { *self = *self $op rhs; }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl Sum for ExtReal {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ExtReal::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_keeps_tiny_tail() {
        let tiny = 2f64.powi(-60);
        let s = ExtReal::ONE + ExtReal::from_f64(tiny);
        assert_eq!(s.hi(), 1.0);
        assert_eq!(s.lo(), tiny);
        assert_eq!((s - ExtReal::ONE).to_f64(), tiny);
    }

    #[test]
    fn mul_by_one_is_identity() {
        for x in [0.1, -3.5e200, 7.0, 1e-300] {
            let v = ExtReal::new(x, x * 1e-17);
            assert_eq!(v * ExtReal::ONE, v);
        }
    }

    #[test]
    fn from_f64_has_zero_tail() {
        let v = ExtReal::from_f64(0.3);
        assert_eq!(v.hi(), 0.3);
        assert_eq!(v.lo(), 0.0);
    }

    #[test]
    fn from_i64_is_exact() {
        let i = (1i64 << 60) + 3;
        let v = ExtReal::from_i64(i);
        assert_eq!(v.hi() as i128 + v.lo() as i128, i as i128);
    }

    #[test]
    fn sqrt_small_cases() {
        assert_eq!(ExtReal::from_f64(4.0).sqrt(), ExtReal::from_f64(2.0));
        assert_eq!(ExtReal::ZERO.sqrt(), ExtReal::ZERO);
        let r = ExtReal::from_f64(2.0).sqrt();
        let err = ((r * r - ExtReal::from_f64(2.0)) / 2.0).to_f64().abs();
        assert!(err < 1e-30, "{err:e}");
        assert!(matches!(
            ExtReal::from_f64(-1.0).try_sqrt(),
            Err(ExtPrecError::NegativeSqrt(_))
        ));
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert_eq!(
            ExtReal::ONE.try_div(ExtReal::ZERO),
            Err(ExtPrecError::DivisionByZero)
        );
        assert!(!(ExtReal::ONE / ExtReal::ZERO).is_finite());
    }

    #[test]
    fn ordering_uses_tail() {
        let a = ExtReal::new(1.0, 1e-20);
        let b = ExtReal::new(1.0, -1e-20);
        assert!(b < a);
        assert_eq!(a.max(b), a);
        assert_eq!(a.min(b), b);
    }
}
