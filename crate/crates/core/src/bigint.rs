//! Exact signed integers of unbounded width.
//!
//! `Int` is a thin newtype over [`num_bigint::BigInt`]. Arithmetic that should
//! be metered goes through [`CostLedger`](crate::ledger::CostLedger); the
//! `std::ops` impls here are unmetered and intended for parameter setup and
//! test oracles.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(BigInt);

impl Int {
    pub fn zero() -> Self {
        Int(BigInt::zero())
    }

    pub fn one() -> Self {
        Int(BigInt::one())
    }

    /// `2^k`.
    pub fn pow2(k: u64) -> Self {
        Int(BigInt::one() << k)
    }

    /// Number of bits in `|x|`, with the convention `bit_length(0) == 1`.
    pub fn bit_length(&self) -> u64 {
        self.0.bits().max(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.sign() == Sign::Minus
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.0.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Int {
        Int(self.0.abs())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_bigint(&self) -> &BigInt {
        &self.0
    }

    pub fn into_bigint(self) -> BigInt {
        self.0
    }

    /// Number of trailing zero bits of `|x|`; `None` for zero.
    pub fn trailing_zeros(&self) -> Option<u64> {
        self.0.trailing_zeros()
    }

    /// Floor division by `2^k` (an arithmetic right shift).
    pub fn shr_floor(&self, k: u64) -> Int {
        Int(&self.0 >> k)
    }

    /// `x mod 2^k` taken in `[0, 2^k)`.
    pub fn mod_pow2(&self, k: u64) -> Int {
        Int(self.0.mod_floor(&(BigInt::one() << k)))
    }

    pub fn shl(&self, k: u64) -> Int {
        Int(&self.0 << k)
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int(v)
    }
}

macro_rules! from_prim {
    ($($t:ty),*) => {$(
        impl From<$t> for Int {
            fn from(v: $t) -> Self {
                Int(BigInt::from(v))
            }
        }
    )*};
}
from_prim!(i8, i16, i32, i64, i128, u8, u16, u32, u64, u128, usize);

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Int {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigInt::from_str(s).map(Int)
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        Int(-self.0)
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        Int(-&self.0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Int> for &Int {
            type Output = Int;
            fn $m(self, rhs: &Int) -> Int {
                Int($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr<Int> for Int {
            type Output = Int;
            fn $m(self, rhs: Int) -> Int {
                Int($tr::$m(self.0, rhs.0))
            }
        }
        impl $tr<&Int> for Int {
            type Output = Int;
            fn $m(self, rhs: &Int) -> Int {
                Int($tr::$m(self.0, &rhs.0))
            }
        }
        impl $tr<Int> for &Int {
            type Output = Int;
            fn $m(self, rhs: Int) -> Int {
                Int($tr::$m(&self.0, rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

// Values that fit in an i64 serialize as JSON numbers, anything wider as a
// decimal string so that no consumer silently loses precision.
impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;

        impl<'de> Visitor<'de> for IntVisitor {
            type Value = Int;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int::from(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int::from(v))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                Int::from_str(v.trim()).map_err(E::custom)
            }
        }

        d.deserialize_any(IntVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_length_examples() {
        assert_eq!(Int::zero().bit_length(), 1);
        assert_eq!(Int::one().bit_length(), 1);
        assert_eq!(Int::from(8).bit_length(), 4);
        assert_eq!(Int::from(-8).bit_length(), 4);
        assert_eq!(Int::pow2(100).bit_length(), 101);
    }

    #[test]
    fn shr_floor_rounds_toward_negative_infinity() {
        assert_eq!(Int::from(-5).shr_floor(1), Int::from(-3));
        assert_eq!(Int::from(5).shr_floor(1), Int::from(2));
        assert_eq!(Int::from(-4).shr_floor(2), Int::from(-1));
        assert_eq!(Int::from(-5).mod_pow2(2), Int::from(3));
    }

    #[test]
    fn serde_roundtrip_small_and_wide() {
        let small = Int::from(-42);
        assert_eq!(serde_json::to_string(&small).unwrap(), "-42");
        let wide = Int::pow2(80);
        let s = serde_json::to_string(&wide).unwrap();
        assert_eq!(s, "\"1208925819614629174706176\"");
        let back: Int = serde_json::from_str(&s).unwrap();
        assert_eq!(back, wide);
    }
}
