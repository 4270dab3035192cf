//! Exact dyadic rationals `m / 2^e`.

use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// `mantissa / 2^exponent`, kept canonical: either `exponent == 0` or the
/// mantissa is odd. Zero is `0 / 2^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: u64) -> Self {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let shift = mantissa.trailing_zeros().unwrap_or(0).min(exponent);
        Dyadic { mantissa: mantissa >> shift, exponent: exponent - shift }
    }

    pub fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Dyadic::from_integer(BigInt::one())
    }

    pub fn from_integer(value: BigInt) -> Self {
        Dyadic { mantissa: value, exponent: 0 }
    }

    pub fn from_i64(value: i64) -> Self {
        Dyadic::from_integer(BigInt::from(value))
    }

    /// `numer / 2^exponent`.
    pub fn from_parts(numer: i64, exponent: u64) -> Self {
        Dyadic::new(BigInt::from(numer), exponent)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    pub fn abs(&self) -> Self {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    /// `self * 2^shift` for a signed shift.
    pub fn mul_pow2(&self, shift: i64) -> Self {
        if shift >= 0 {
            let s = shift as u64;
            let cancel = s.min(self.exponent);
            Dyadic::new(&self.mantissa << (s - cancel), self.exponent - cancel)
        } else {
            Dyadic::new(self.mantissa.clone(), self.exponent + shift.unsigned_abs())
        }
    }

    pub fn half(&self) -> Self {
        self.mul_pow2(-1)
    }

    /// `⌊self · 2^shift⌋`.
    pub fn floor_scaled(&self, shift: u64) -> BigInt {
        if shift >= self.exponent {
            &self.mantissa << (shift - self.exponent)
        } else {
            let denom = BigInt::one() << (self.exponent - shift);
            self.mantissa.div_floor(&denom)
        }
    }

    pub fn floor(&self) -> BigInt {
        self.floor_scaled(0)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.exponent)
    }

    /// `None` unless the reduced denominator is a power of two.
    pub fn from_rational(value: &BigRational) -> Option<Self> {
        let denom = value.denom();
        let tz = denom.trailing_zeros()?;
        if denom != &(BigInt::one() << tz) {
            return None;
        }
        Some(Dyadic::new(value.numer().clone(), tz))
    }

    /// Nearest-ish `f64`, for plotting and decimal columns only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let drop = bits.saturating_sub(60);
        let top = (&self.mantissa >> drop).to_i64().unwrap_or(0) as f64;
        top * pow2_f64(drop as i64 - self.exponent as i64)
    }

    /// Exact decimal expansion (always terminates for a dyadic).
    pub fn to_decimal_string(&self) -> String {
        if self.exponent == 0 {
            return self.mantissa.to_string();
        }
        // m / 2^e = m * 5^e / 10^e
        let scaled = self.mantissa.abs() * num_traits::pow(BigInt::from(5), self.exponent as usize);
        let digits = scaled.to_string();
        let e = self.exponent as usize;
        let padded = if digits.len() <= e {
            format!("{}{}", "0".repeat(e - digits.len() + 1), digits)
        } else {
            digits
        };
        let (int_part, frac_part) = padded.split_at(padded.len() - e);
        let sign = if self.is_negative() { "-" } else { "" };
        format!("{sign}{int_part}.{frac_part}")
    }

    /// Decimal string truncated to `places` digits after the point.
    pub fn to_decimal_places(&self, places: usize) -> String {
        let full = self.to_decimal_string();
        match full.find('.') {
            Some(dot) if full.len() > dot + 1 + places => {
                let cut = &full[..dot + 1 + places];
                if places == 0 {
                    cut.trim_end_matches('.').to_string()
                } else {
                    cut.to_string()
                }
            }
            _ => full,
        }
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u64) {
        let e = self.exponent.max(other.exponent);
        (
            &self.mantissa << (e - self.exponent),
            &other.mantissa << (e - other.exponent),
            e,
        )
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
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
}

fn pow2_f64(k: i64) -> f64 {
    if k > 1023 {
        f64::INFINITY
    } else if k >= -1022 {
        f64::from_bits(((k + 1023) as u64) << 52)
    } else if k >= -1074 {
        f64::from_bits(1u64 << (k + 1074))
    } else {
        0.0
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_i64(v)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::from_integer(v)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: &Dyadic) -> Dyadic {
                (&self).$method(rhs)
            }
        }
        impl $tr<Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Dyadic> for Dyadic {
    fn sub_assign(&mut self, rhs: &Dyadic) {
        *self = &*self - rhs;
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

/// Canonical exact string: `m` for integers, otherwise `m/q` with `q = 2^e`
/// written out in decimal (`-3/16`).
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/{}", self.mantissa, BigInt::one() << self.exponent)
        }
    }
}

/// Accepts `p`, `p/q` with `q` a power of two, and `p/2^e`.
impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not an exact dyadic (expected p, p/q or p/2^e)"));
        let parse_int = |t: &str| BigInt::from_str(t.trim()).map_err(|_| bad());
        match s.split_once('/') {
            None => Ok(Dyadic::from_integer(parse_int(s)?)),
            Some((num, den)) => {
                let numer = parse_int(num)?;
                let den = den.trim();
                if let Some(exp) = den.strip_prefix("2^") {
                    let e: u64 = exp.trim().parse().map_err(|_| bad())?;
                    return Ok(Dyadic::new(numer, e));
                }
                let denom = parse_int(den)?;
                if !denom.is_positive() {
                    return Err(bad());
                }
                Dyadic::from_rational(&BigRational::new(numer, denom)).ok_or_else(bad)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let x = Dyadic::new(BigInt::from(12), 4);
        assert_eq!(x.mantissa(), &BigInt::from(3));
        assert_eq!(x.exponent(), 2);
        assert_eq!(Dyadic::new(BigInt::from(8), 2), Dyadic::from_i64(2));
        assert_eq!(Dyadic::new(BigInt::zero(), 9).exponent(), 0);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(d("-1/8").to_string(), "-1/8");
        assert_eq!(d("-1/2^3"), d("-1/8"));
        assert_eq!(d("6/4").to_string(), "3/2");
        assert_eq!(d("  7 ").to_string(), "7");
        assert_eq!(d("4/2").to_string(), "2");
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("1/0".parse::<Dyadic>().is_err());
        assert!("0.5".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(d("1/8") + d("3/8"), d("1/2"));
        assert_eq!(d("1/8") - d("3/8"), d("-1/4"));
        assert_eq!(d("3/4") * d("-5/8").abs().max(d("1/2")), d("15/32"));
        assert_eq!(d("5").mul_pow2(-3), d("5/8"));
        assert_eq!(d("5/8").mul_pow2(3), d("5"));
        assert_eq!(d("5/8").mul_pow2(5), d("20"));
        assert!(d("-1/2") < d("-11/32"));
    }

    #[test]
    fn floors() {
        assert_eq!(d("1/2").floor_scaled(3), BigInt::from(4));
        assert_eq!(d("7/16").floor_scaled(3), BigInt::from(3));
        assert_eq!(d("-1/16").floor_scaled(3), BigInt::from(-1));
        assert_eq!(d("-3").floor(), BigInt::from(-3));
        assert_eq!(d("-5/2").ceil(), BigInt::from(-2));
    }

    #[test]
    fn decimal_strings() {
        assert_eq!(d("-11/32").to_decimal_string(), "-0.34375");
        assert_eq!(d("3/2").to_decimal_string(), "1.5");
        assert_eq!(d("-4").to_decimal_string(), "-4");
        assert_eq!(d("1/1024").to_decimal_places(4), "0.0009");
        assert_eq!(d("-1013/2048").to_f64(), -1013.0 / 2048.0);
    }

    fn arb_dyadic() -> impl Strategy<Value = Dyadic> {
        (any::<i64>(), 0u64..200).prop_map(|(m, e)| Dyadic::from_parts(m, e))
    }

    proptest! {
        #[test]
        fn agrees_with_rationals(a in arb_dyadic(), b in arb_dyadic()) {
            let (ra, rb) = (a.to_rational(), b.to_rational());
            prop_assert_eq!((&a + &b).to_rational(), &ra + &rb);
            prop_assert_eq!((&a - &b).to_rational(), &ra - &rb);
            prop_assert_eq!((&a * &b).to_rational(), &ra * &rb);
            prop_assert_eq!(a.cmp(&b), ra.cmp(&rb));
        }

        #[test]
        fn string_round_trip(a in arb_dyadic()) {
            prop_assert_eq!(a.to_string().parse::<Dyadic>().unwrap(), a);
        }
    }
}
