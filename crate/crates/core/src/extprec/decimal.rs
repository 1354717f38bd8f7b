//! Exact decimal conversion for [`ExtReal`].
//!
//! Both directions go through an exact rational intermediate, so formatting
//! with enough digits and parsing back returns the identical pair.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExtReal;

/// Minimum significant digits written by [`ExtReal::to_roundtrip_string`].
pub const MIN_SERIAL_DIGITS: usize = 34;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid decimal literal {0:?}")]
pub struct ParseExtRealError(pub String);

impl ExtReal {
    /// The exact value `hi + lo` as a rational; `None` if non-finite.
    pub fn to_rational(self) -> Option<BigRational> {
        let hi = BigRational::from_float(self.hi)?;
        let lo = BigRational::from_float(self.lo)?;
        Some(hi + lo)
    }

    /// Nearest double-double to `q` (each word rounded to nearest-even).
    pub fn from_rational(q: &BigRational) -> Self {
        let hi = rational_to_f64(q);
        let rest = q - BigRational::from_float(hi).unwrap_or_else(BigRational::zero);
        let lo = rational_to_f64(&rest);
        ExtReal::new(hi, lo)
    }

    /// Scientific notation with `digits` significant digits, correctly rounded.
    pub fn to_sci_string(self, digits: usize) -> String {
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        let Some(q) = self.to_rational() else {
            return "NaN".into();
        };
        if q.is_zero() {
            return "0".into();
        }
        let digits = digits.max(1);
        let negative = q.is_negative();
        let q = q.abs();

        let mut exp10 = self.hi.abs().log10().floor() as i32;
        while q >= pow10(exp10 + 1) {
            exp10 += 1;
        }
        while q < pow10(exp10) {
            exp10 -= 1;
        }
        let scaled = q * pow10(digits as i32 - 1 - exp10);
        let mut mant = round_half_even(&scaled);
        if mant == BigInt::from(10u32).pow(digits as u32) {
            mant /= 10u32;
            exp10 += 1;
        }
        let s = mant.to_string();
        let mut out = String::with_capacity(digits + 8);
        if negative {
            out.push('-');
        }
        out.push_str(&s[..1]);
        if s.len() > 1 {
            out.push('.');
            out.push_str(&s[1..]);
        }
        out.push('e');
        out.push_str(&exp10.to_string());
        out
    }

    /// Shortest scientific string with at least [`MIN_SERIAL_DIGITS`] digits
    /// that parses back to exactly `self`.
    pub fn to_roundtrip_string(self) -> String {
        let mut last = String::new();
        for digits in MIN_SERIAL_DIGITS..=64 {
            last = self.to_sci_string(digits);
            if last.parse::<ExtReal>().ok() == Some(self) {
                return last;
            }
        }
        last
    }
}

impl FromStr for ExtReal {
    type Err = ParseExtRealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseExtRealError(s.to_string());
        let t = s.trim();
        let (negative, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (mant_str, exp) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i32>().map_err(|_| err())?),
            None => (body, 0),
        };
        let (int_part, frac_part) = match mant_str.find('.') {
            Some(i) => (&mant_str[..i], &mant_str[i + 1..]),
            None => (mant_str, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part
            .bytes()
            .chain(frac_part.bytes())
            .all(|b| b.is_ascii_digit())
        {
            return Err(err());
        }
        let digits = format!("{int_part}{frac_part}");
        let mant = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(err)?;
        let mut q = BigRational::from_integer(mant) * pow10(exp - frac_part.len() as i32);
        if negative {
            q = -q;
        }
        Ok(ExtReal::from_rational(&q))
    }
}

fn pow10(e: i32) -> BigRational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs());
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn round_half_even(q: &BigRational) -> BigInt {
    let (quo, rem) = q.numer().div_rem(q.denom());
    let twice = rem * 2u32;
    match twice.cmp(q.denom()) {
        std::cmp::Ordering::Less => quo,
        std::cmp::Ordering::Greater => quo + 1u32,
        std::cmp::Ordering::Equal => {
            if quo.is_even() {
                quo
            } else {
                quo + 1u32
            }
        }
    }
}

fn ldexp(m: f64, e: i64) -> f64 {
    let mut x = m;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// Correctly rounded (nearest-even) conversion; normal range only.
pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let negative = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().abs();
    let mut shift = num.bits() as i64 - den.bits() as i64 - 53;
    loop {
        let (n, d) = if shift >= 0 {
            (num.clone(), &den << shift as usize)
        } else {
            (&num << (-shift) as usize, den.clone())
        };
        let (m, r) = n.div_rem(&d);
        let bits = m.bits();
        if bits > 53 {
            shift += 1;
            continue;
        }
        if bits < 53 {
            shift -= 1;
            continue;
        }
        let twice = r * 2u32;
        let m = match twice.cmp(&d) {
            std::cmp::Ordering::Less => m,
            std::cmp::Ordering::Greater => m + 1u32,
            std::cmp::Ordering::Equal => {
                if m.is_even() {
                    m
                } else {
                    m + 1u32
                }
            }
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        let v = ldexp(mf, shift);
        return if negative { -v } else { v };
    }
}
