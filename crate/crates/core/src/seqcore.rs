//! Input sequences for the triangle: Thue-Morse over `{-1, +1}` and the
//! centered Sturmian pair `v(α)`, `w(α)`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational, always in lowest terms with a positive denominator.
pub type RationalScalar = BigRational;

/// One Thue-Morse letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.value())
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    /// Applies the sign to `value`.
    pub fn apply<T: Neg<Output = T>>(self, value: T) -> T {
        match self {
            Sign::Minus => -value,
            Sign::Plus => value,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// `u_n`, with `u_0 = -1`: `+1` iff `n` has an odd number of one bits.
pub fn thue_morse(n: u64) -> Sign {
    if n.count_ones() % 2 == 1 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// First `len` letters of the fixed point of `-1 -> (-1)1, 1 -> 1(-1)`
/// seeded at `-1`, produced by iterating the substitution.
pub fn thue_morse_prefix(len: usize) -> Vec<Sign> {
    let mut word = vec![Sign::Minus];
    while word.len() < len {
        word = word.iter().flat_map(|&s| [s, -s]).collect();
    }
    word.truncate(len.max(1));
    word
}

/// `⌊r⌋` by floor division of numerator by denominator.
pub fn floor_rational(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Sturmian slope restricted to `[0, 1]`.
///
/// Only rational slopes are representable; for an irrational slope pass a
/// continued-fraction convergent `p/q`, and read results only for indices well
/// below `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alpha(BigRational);

impl Alpha {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::AlphaOutOfRange(value.to_string()));
        }
        Ok(Alpha(value))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidArgument("alpha denominator is zero"));
        }
        Alpha::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// `{kα} = kα - ⌊kα⌋`.
    pub fn fractional_multiple(&self, k: u64) -> BigRational {
        let kalpha = &self.0 * BigRational::from_integer(k.into());
        let floor = BigRational::from_integer(floor_rational(&kalpha));
        kalpha - floor
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `v_n(α) = ⌊(n+1)α⌋ - ⌊nα⌋`, always 0 or 1 for `α ∈ [0, 1]`.
pub fn sturmian_v(alpha: &Alpha, n: u64) -> u8 {
    let at = |m: u64| floor_rational(&(alpha.value() * BigRational::from_integer(m.into())));
    let diff = at(n + 1) - at(n);
    if diff.is_zero() {
        0
    } else {
        1
    }
}

/// `w_n(α)`: `α` where `v_n(α) = 0`, `-(1 - α)` otherwise.
pub fn sturmian_w(alpha: &Alpha, n: u64) -> BigRational {
    if sturmian_v(alpha, n) == 0 {
        alpha.value().clone()
    } else {
        alpha.value() - BigRational::one()
    }
}
