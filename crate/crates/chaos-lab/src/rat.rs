//! Arbitrary-precision rationals.
//!
//! Every coordinate, radius, tolerance and distance in this crate is a
//! `Rat`. Values are always in lowest terms, so structural equality is
//! numeric equality and `Rat` can serve as a map key. Serialized form is
//! `"num/den"` (or `"num"` for integers); floats never enter the core.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// `num/den`. Panics if `den == 0`; use [`Rat::from_str`] for untrusted input.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ParseRat("zero denominator".into()));
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// `2^e`, `e` of either sign.
    pub fn pow2(e: i64) -> Self {
        let one = BigInt::one();
        if e >= 0 {
            Rat(BigRational::from_integer(one << e as usize))
        } else {
            Rat(BigRational::new(one, BigInt::one() << (-e) as usize))
        }
    }

    /// `self^e`, `e` of either sign. Panics on `0^negative`.
    pub fn pow(&self, e: i32) -> Self {
        Rat(self.0.pow(e))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor_big(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Nearest integer, ties toward +∞ (`⌊x⌉ = floor(x + 1/2)`).
    pub fn round_nearest(&self) -> BigInt {
        (&self.0 + BigRational::new(BigInt::one(), BigInt::from(2)))
            .floor()
            .to_integer()
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> Self {
        Rat(&self.0 - self.0.floor())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Lossy float view, for plot output only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `"n"` and `"n/d"` with optional signs. Never panics.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::ParseRat(format!("invalid rational `{s}`"));
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        // Reject exotic forms BigInt::from_str would accept (e.g. "+-3").
        let ok = |t: &str| {
            let t = t.strip_prefix(['+', '-']).unwrap_or(t);
            !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) && t.len() <= 200
        };
        if !ok(num_s) || !ok(den_s) {
            return Err(bad());
        }
        let num = BigInt::from_str(num_s).map_err(|_| bad())?;
        let den = BigInt::from_str(den_s).map_err(|_| bad())?;
        Rat::from_big(num, den)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}
