//! Binary floating point numbers with a configurable mantissa width.
//!
//! A value is `mant * 2^exp` with `|mant| < 2^prec`. Every operation rounds
//! its exact result to `prec` bits, round-half-even. The exponent is an `i64`,
//! so no nonzero result ever underflows to zero.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{Field, FieldTag};
use super::AlgebraError;

#[derive(Clone)]
pub struct BigFloat {
    /// Odd, or zero; trailing zero bits are folded into `exp`.
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn pow10(k: u64) -> BigUint {
    num_traits::pow(BigUint::from(10u32), k as usize)
}

impl BigFloat {
    pub fn zero(prec: u32) -> BigFloat {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> BigFloat {
        BigFloat::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> BigFloat {
        BigFloat::from_bigint(&BigInt::from(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> BigFloat {
        round(v.clone(), 0, false, prec)
    }

    /// Exact conversion of a finite `f64` (then rounded to `prec`).
    pub fn from_f64(v: f64, prec: u32) -> BigFloat {
        assert!(v.is_finite(), "non-finite f64 {v}");
        if v == 0.0 {
            return BigFloat::zero(prec);
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = if neg { -BigInt::from(m) } else { BigInt::from(m) };
        round(m, e, false, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Same value, re-rounded to a different precision.
    pub fn with_precision(&self, prec: u32) -> BigFloat {
        round(self.mant.clone(), self.exp, false, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Position just above the most significant bit: `|x| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    /// Base-2 magnitude estimate; `None` for zero.
    pub fn log2_magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.top() - 1)
        }
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> BigFloat {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &BigFloat) -> BigFloat {
        let prec = self.prec.max(other.prec);
        if other.is_zero() {
            return self.with_precision(prec);
        }
        if self.is_zero() {
            return other.with_precision(prec);
        }
        let (big, small) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        // When `small` lies entirely below the rounding window of `big`, only
        // its sign matters for rounding; avoid shifting by the exponent gap.
        let k = (prec as i64 + 3 - big.mant.bits() as i64).max(0);
        let ext_exp = big.exp - k;
        if small.top() <= ext_exp - 2 {
            let ext = &big.mant << (k as u64 + 2);
            let nudged = if small.is_negative() { ext - 1 } else { ext + 1 };
            return round(nudged, ext_exp - 2, false, prec);
        }
        let lo = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - lo) as u64;
        let b = &other.mant << (other.exp - lo) as u64;
        round(a + b, lo, false, prec)
    }

    pub fn sub(&self, other: &BigFloat) -> BigFloat {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BigFloat) -> BigFloat {
        let prec = self.prec.max(other.prec);
        if self.is_zero() || other.is_zero() {
            return BigFloat::zero(prec);
        }
        round(&self.mant * &other.mant, self.exp + other.exp, false, prec)
    }

    pub fn div(&self, other: &BigFloat) -> Result<BigFloat, AlgebraError> {
        let prec = self.prec.max(other.prec);
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZeroCoefficient);
        }
        if self.is_zero() {
            return Ok(BigFloat::zero(prec));
        }
        let shift = (prec as i64 + 3 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = self.mant.magnitude() << shift as u64;
        let (q, r) = num.div_rem(other.mant.magnitude());
        let neg = self.is_negative() != other.is_negative();
        let q = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, q);
        Ok(round(q, self.exp - other.exp - shift, !r.is_zero(), prec))
    }

    pub fn recip(&self) -> Result<BigFloat, AlgebraError> {
        BigFloat::one(self.prec).div(self)
    }

    /// Square root; `None` for negative input.
    pub fn sqrt(&self) -> Option<BigFloat> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let prec = self.prec;
        let mut shift = (2 * prec as i64 + 6 - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) == 1 {
            shift += 1;
        }
        let m = self.mant.magnitude() << shift as u64;
        let root = m.sqrt();
        let inexact = &root * &root != m;
        Some(round(
            BigInt::from(root),
            (self.exp - shift) / 2,
            inexact,
            prec,
        ))
    }

    pub fn cmp_value(&self, other: &BigFloat) -> Ordering {
        let d = self.sub(other);
        if d.is_zero() {
            Ordering::Equal
        } else if d.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (top, e) = if bits > 64 {
            let s = bits - 64;
            ((self.mant.magnitude() >> s).to_u64().unwrap(), self.exp + s as i64)
        } else {
            (self.mant.magnitude().to_u64().unwrap(), self.exp)
        };
        let mut v = top as f64;
        let mut e = e;
        // powi saturates cleanly in chunks.
        while e > 1000 {
            v *= 2f64.powi(1000);
            e -= 1000;
            if v.is_infinite() {
                break;
            }
        }
        while e < -1000 {
            v *= 2f64.powi(-1000);
            e += 1000;
            if v == 0.0 {
                break;
            }
        }
        v *= 2f64.powi(e as i32);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Parses `[-+]digits[.digits][e[-+]digits]`, correctly rounded to `prec`.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<BigFloat, AlgebraError> {
        let (digits, dec_exp) = split_decimal(s)?;
        if digits.is_zero() {
            return Ok(BigFloat::zero(prec));
        }
        if dec_exp >= 0 {
            let v = digits * BigInt::from(pow10(dec_exp as u64));
            return Ok(round(v, 0, false, prec));
        }
        let den = pow10((-dec_exp) as u64);
        let shift = (prec as i64 + 3 + den.bits() as i64 - digits.bits() as i64).max(0);
        let num = digits.magnitude() << shift as u64;
        let (q, r) = num.div_rem(&den);
        let q = BigInt::from_biguint(digits.sign(), q);
        Ok(round(q, -shift, !r.is_zero(), prec))
    }

    /// Exact decimal rendering; parsing it back at the same precision
    /// reproduces the value bit for bit.
    pub fn to_exact_decimal(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.exp >= 0 {
            return (&self.mant << self.exp as u64).to_string();
        }
        let k = (-self.exp) as u64;
        let scaled = &self.mant * BigInt::from(num_traits::pow(BigUint::from(5u32), k as usize));
        format!("{scaled}e-{k}")
    }

    /// Scientific notation with `digits` significant digits, round-half-even.
    pub fn to_decimal(&self, digits: usize) -> String {
        assert!(digits >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let mag = self.mant.magnitude();
        let log10 = ((self.top() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let mut k = log10 - digits as i64 + 1;
        let lo = pow10(digits as u64 - 1);
        let hi = pow10(digits as u64);
        let q = loop {
            let mut num = mag.clone();
            let mut den = BigUint::one();
            if self.exp >= 0 {
                num <<= self.exp as u64;
            } else {
                den <<= (-self.exp) as u64;
            }
            if k >= 0 {
                den *= pow10(k as u64);
            } else {
                num *= pow10((-k) as u64);
            }
            let (q, r) = num.div_rem(&den);
            let twice = r << 1u32;
            let q = match twice.cmp(&den) {
                Ordering::Greater => q + 1u32,
                Ordering::Equal if q.is_odd() => q + 1u32,
                _ => q,
            };
            if q >= hi {
                k += 1;
            } else if q < lo {
                k -= 1;
            } else {
                break q;
            }
        };
        let s = q.to_string();
        let trimmed = s.trim_end_matches('0');
        let (head, tail) = trimmed.split_at(1);
        let sci_exp = k + digits as i64 - 1;
        let sign = if self.is_negative() { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{sci_exp}")
        } else {
            format!("{sign}{head}.{tail}e{sci_exp}")
        }
    }
}

fn split_decimal(s: &str) -> Result<(BigInt, i64), AlgebraError> {
    let bad = || AlgebraError::Parse(format!("malformed decimal {s:?}"));
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = [int_part, frac_part].concat();
    let mut v: BigInt = all.parse().map_err(|_| bad())?;
    if neg {
        v = -v;
    }
    Ok((v, exp - frac_part.len() as i64))
}

/// Rounds `mant * 2^exp` to `prec` bits. `sticky` marks a discarded nonzero
/// tail strictly below the last bit of `mant`; callers passing it must supply
/// at least `prec + 2` bits.
fn round(mant: BigInt, exp: i64, sticky: bool, prec: u32) -> BigFloat {
    if mant.is_zero() {
        debug_assert!(!sticky);
        return BigFloat::zero(prec);
    }
    let (sign, mut mag) = mant.into_parts();
    let mut exp = exp;
    let bits = mag.bits();
    if bits > prec as u64 {
        let shift = bits - prec as u64;
        let round_bit = mag.bit(shift - 1);
        let below = sticky || mag.trailing_zeros().unwrap_or(0) < shift - 1;
        mag >>= shift;
        exp += shift as i64;
        if round_bit && (below || mag.bit(0)) {
            mag += 1u32;
            if mag.bits() > prec as u64 {
                mag >>= 1u32;
                exp += 1;
            }
        }
    } else {
        debug_assert!(!sticky, "sticky rounding needs guard bits");
    }
    let tz = mag.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        mag >>= tz;
        exp += tz as i64;
    }
    BigFloat {
        mant: BigInt::from_biguint(sign, mag),
        exp,
        prec,
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.mant == other.mant && self.exp == other.exp
    }
}

impl Eq for BigFloat {}

impl Hash for BigFloat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mant.hash(state);
        self.exp.hash(state);
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20).max(1);
        f.write_str(&self.to_decimal(digits))
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

/// Big floats of one fixed precision, as a coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FloatField {
    pub precision_bits: u32,
}

impl FloatField {
    pub fn new(precision_bits: u32) -> FloatField {
        assert!(precision_bits >= 2, "precision must be at least 2 bits");
        FloatField { precision_bits }
    }

    pub fn parse_decimal(&self, s: &str) -> Result<BigFloat, AlgebraError> {
        BigFloat::parse_decimal(s, self.precision_bits)
    }
}

impl Field for FloatField {
    type Elem = BigFloat;

    fn zero(&self) -> BigFloat {
        BigFloat::zero(self.precision_bits)
    }

    fn one(&self) -> BigFloat {
        BigFloat::one(self.precision_bits)
    }

    fn from_i64(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.precision_bits)
    }

    fn is_zero(&self, a: &BigFloat) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b)
    }

    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b)
    }

    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b)
    }

    fn neg(&self, a: &BigFloat) -> BigFloat {
        a.neg()
    }

    fn inv(&self, a: &BigFloat) -> Result<BigFloat, AlgebraError> {
        a.recip()
    }

    fn div(&self, a: &BigFloat, b: &BigFloat) -> Result<BigFloat, AlgebraError> {
        a.div(b)
    }

    fn equal(&self, a: &BigFloat, b: &BigFloat) -> bool {
        a == b
    }

    fn from_decimal(&self, s: &str) -> Result<BigFloat, AlgebraError> {
        BigFloat::parse_decimal(s, self.precision_bits)
    }

    fn tag(&self) -> FieldTag {
        FieldTag::Float {
            precision_bits: self.precision_bits,
        }
    }

    fn format(&self, a: &BigFloat) -> String {
        a.to_exact_decimal()
    }

    fn parse(&self, s: &str) -> Result<BigFloat, AlgebraError> {
        self.parse_decimal(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u32 = 128;

    fn bf(v: f64) -> BigFloat {
        BigFloat::from_f64(v, P)
    }

    #[test]
    fn small_integers_are_exact() {
        let a = BigFloat::from_i64(12, P);
        let b = BigFloat::from_i64(-5, P);
        assert_eq!(a.add(&b), BigFloat::from_i64(7, P));
        assert_eq!(a.mul(&b), BigFloat::from_i64(-60, P));
        assert_eq!(a.div(&BigFloat::from_i64(4, P)).unwrap(), BigFloat::from_i64(3, P));
        assert_eq!(a.sub(&a), BigFloat::zero(P));
    }

    #[test]
    fn rounding_is_half_even() {
        // 2^4 + 1 and 2^4 + 3 at 4 bits: ties go to even mantissa.
        let p = 4;
        assert_eq!(BigFloat::from_i64(17, p), BigFloat::from_i64(16, p));
        assert_eq!(BigFloat::from_i64(19, p), BigFloat::from_i64(20, p));
        assert_eq!(BigFloat::from_i64(18, p), BigFloat::from_i64(18, p));
        assert_eq!(BigFloat::from_i64(-19, p), BigFloat::from_i64(-20, p));
    }

    #[test]
    fn tiny_addend_only_nudges_rounding() {
        let p = 8;
        let one = BigFloat::one(p);
        let tiny = BigFloat::from_f64(2f64.powi(-400), p);
        assert_eq!(one.add(&tiny), one);
        assert_eq!(one.sub(&tiny), one);
        // 1 + 2^-8 is an exact tie at 8 bits and rounds to even.
        let tie = BigFloat::from_f64(1.0 + 2f64.powi(-8), 64);
        assert_eq!(tie.with_precision(p), one);
        let odd = BigFloat::from_f64(1.0 + 2f64.powi(-7), p);
        assert_eq!(odd.add(&tiny), odd);
        assert_eq!(odd.sub(&tiny), odd);
    }

    #[test]
    fn no_underflow_to_zero() {
        let mut x = BigFloat::from_f64(1e-300, 64);
        for _ in 0..10 {
            x = x.mul(&x);
        }
        assert!(!x.is_zero());
        assert!(x.log2_magnitude().unwrap() < -1_000_000);
    }

    #[test]
    fn sqrt_and_division() {
        let two = BigFloat::from_i64(2, 256);
        let r = two.sqrt().unwrap();
        let back = r.mul(&r);
        let err = back.sub(&two).abs();
        assert!(err.log2_magnitude().unwrap() <= -254);
        assert!(BigFloat::from_i64(-1, 64).sqrt().is_none());
        assert_eq!(BigFloat::from_i64(49, 64).sqrt().unwrap(), BigFloat::from_i64(7, 64));
        assert_eq!(
            BigFloat::one(64).div(&BigFloat::zero(64)),
            Err(AlgebraError::DivisionByZeroCoefficient)
        );
        let third = BigFloat::one(200).div(&BigFloat::from_i64(3, 200)).unwrap();
        assert_eq!(third.to_decimal(10), "3.333333333e-1");
    }

    #[test]
    fn decimal_parsing() {
        let p = 200;
        assert_eq!(BigFloat::parse_decimal("0.5", p).unwrap(), BigFloat::from_f64(0.5, p));
        assert_eq!(BigFloat::parse_decimal("-2.5e2", p).unwrap(), BigFloat::from_i64(-250, p));
        assert_eq!(BigFloat::parse_decimal("+7", p).unwrap(), BigFloat::from_i64(7, p));
        assert!(BigFloat::parse_decimal("0.1", p).unwrap().to_decimal(60).starts_with("1e-1"));
        assert!(BigFloat::parse_decimal("1.2.3", p).is_err());
        assert!(BigFloat::parse_decimal("", p).is_err());
        assert!(BigFloat::parse_decimal("e5", p).is_err());
        assert_eq!(BigFloat::parse_decimal("0.000", p).unwrap(), BigFloat::zero(p));
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(bf(1234.5).to_decimal(3), "1.23e3");
        assert_eq!(bf(1235.0).to_decimal(3), "1.24e3");
        assert_eq!(bf(-0.015625).to_decimal(10), "-1.5625e-2");
        assert_eq!(bf(999.96).to_decimal(4), "1e3");
        assert_eq!(bf(0.1).to_f64(), 0.1);
        assert_eq!(format!("{:.5}", bf(2.0)), "2e0");
    }

    #[test]
    fn f64_round_trip() {
        for v in [1.0, -3.75, 1e-310, 6.02e23, f64::MAX, f64::MIN_POSITIVE] {
            assert_eq!(BigFloat::from_f64(v, 64).to_f64(), v);
        }
    }

    proptest! {
        #[test]
        fn exact_decimal_round_trips(m in any::<i64>(), e in -2000i64..2000, prec in 64u32..400) {
            let x = BigFloat::from_f64(m as f64, prec).mul(&BigFloat::from_f64(2f64.powi((e % 1000) as i32), prec));
            let s = x.to_exact_decimal();
            prop_assert_eq!(BigFloat::parse_decimal(&s, prec).unwrap(), x);
        }

        #[test]
        fn arithmetic_tracks_f64(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            let (x, y) = (BigFloat::from_f64(a, 53), BigFloat::from_f64(b, 53));
            prop_assert_eq!(x.add(&y).to_f64(), a + b);
            prop_assert_eq!(x.mul(&y).to_f64(), a * b);
            if b != 0.0 {
                prop_assert_eq!(x.div(&y).unwrap().to_f64(), a / b);
            }
            if a >= 0.0 {
                prop_assert_eq!(x.sqrt().unwrap().to_f64(), a.sqrt());
            }
        }
    }
}
