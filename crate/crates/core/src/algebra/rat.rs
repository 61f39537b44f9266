use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use malachite::num::arithmetic::traits::{Abs, DivExact, Pow, Sign};
use malachite::num::basic::traits::{One, Zero};
use malachite::num::conversion::traits::RoundingFrom;
use malachite::num::logic::traits::SignificantBits;
use malachite::rounding_modes::RoundingMode;
use malachite::{Integer, Natural, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(pub(crate) Rational);

impl Rat {
    pub fn zero() -> Self {
        Rat(Rational::ZERO)
    }

    pub fn one() -> Self {
        Rat(Rational::ONE)
    }

    pub fn from_i64(n: i64) -> Self {
        Rat(Rational::from(n))
    }

    pub fn from_u64(n: u64) -> Self {
        Rat(Rational::from(n))
    }

    /// `n / d`; panics if `d == 0`.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rat(Rational::from_signeds(n, d))
    }

    pub fn from_integer(n: Integer) -> Self {
        Rat(Rational::from(n))
    }

    pub fn from_natural(n: Natural) -> Self {
        Rat(Rational::from(n))
    }

    pub fn from_parts(num: Integer, den: Natural) -> Self {
        Rat(Rational::from_integers(num, Integer::from(den)))
    }

    pub fn inner(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == Rational::ZERO
    }

    pub fn is_one(&self) -> bool {
        self.0 == Rational::ONE
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denominator_ref() == Natural::ONE
    }

    pub fn signum(&self) -> Ordering {
        self.0.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Rat {
        Rat((&self.0).abs())
    }

    /// Absolute value of the numerator.
    pub fn numer(&self) -> &Natural {
        self.0.numerator_ref()
    }

    pub fn denom(&self) -> &Natural {
        self.0.denominator_ref()
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(Rational::ONE / &self.0)
    }

    pub fn pow(&self, e: u64) -> Rat {
        Rat((&self.0).pow(e))
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn powi(&self, e: i64) -> Rat {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.recip().pow(e.unsigned_abs())
        }
    }

    /// Bits in numerator plus bits in denominator.
    pub fn bit_size(&self) -> u64 {
        self.0.numerator_ref().significant_bits() + self.0.denominator_ref().significant_bits()
    }

    /// Nearest `f64` (may overflow to infinity).
    pub fn to_f64(&self) -> f64 {
        f64::rounding_from(&self.0, RoundingMode::Nearest).0
    }

    /// Largest `f64` not above the value.
    pub fn to_f64_floor(&self) -> f64 {
        f64::rounding_from(&self.0, RoundingMode::Floor).0
    }

    /// Smallest `f64` not below the value.
    pub fn to_f64_ceil(&self) -> f64 {
        f64::rounding_from(&self.0, RoundingMode::Ceiling).0
    }

    pub fn max(a: Rat, b: Rat) -> Rat {
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn min(a: Rat, b: Rat) -> Rat {
        if a <= b {
            a
        } else {
            b
        }
    }

    /// Numerator as a signed integer.
    pub fn numer_signed(&self) -> Integer {
        let n = Integer::from(self.0.numerator_ref().clone());
        if self.is_negative() {
            -n
        } else {
            n
        }
    }

    /// Binomial coefficient as a rational.
    pub fn binomial(n: u64, k: u64) -> Rat {
        if k > n {
            return Rat::zero();
        }
        let k = k.min(n - k);
        let mut acc = Natural::ONE;
        for i in 0..k {
            acc *= Natural::from(n - i);
            acc = acc.div_exact(Natural::from(i + 1));
        }
        Rat::from_natural(acc)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_i64(n)
    }
}

impl From<Rational> for Rat {
    fn from(r: Rational) -> Self {
        Rat(r)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Error for malformed rational literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatParseError(pub String);

impl fmt::Display for RatParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational `{}`", self.0)
    }
}

impl std::error::Error for RatParseError {}

impl FromStr for Rat {
    type Err = RatParseError;

    /// Accepts `n`, `-n`, `n/d`, `-n/d` with decimal digits.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || RatParseError(s.to_string());
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim_start()),
            None => (false, t),
        };
        let (n, d) = match body.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (body, "1"),
        };
        let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
        if !digits(n) || !digits(d) {
            return Err(err());
        }
        let n = Natural::from_str(n).map_err(|_| err())?;
        let d = Natural::from_str(d).map_err(|_| err())?;
        if d == Natural::ZERO {
            return Err(err());
        }
        let r = Rational::from_naturals(n, d);
        Ok(Rat(if neg { -r } else { r }))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat(self.0.$m(&rhs.0))
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat((&self.0).$m(rhs.0))
            }
        }
        impl $atr<&Rat> for Rat {
            fn $am(&mut self, rhs: &Rat) {
                self.0.$am(&rhs.0);
            }
        }
        impl $atr<Rat> for Rat {
            fn $am(&mut self, rhs: Rat) {
                self.0.$am(rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Div<&Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Div<Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let r: Rat = "-6/8".parse().unwrap();
        assert_eq!(r.to_string(), "-3/4");
        assert_eq!("5".parse::<Rat>().unwrap(), Rat::from_i64(5));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(Rat::binomial(5, 2), Rat::from_i64(10));
        assert_eq!(Rat::binomial(3, 0), Rat::one());
        assert_eq!(Rat::binomial(2, 3), Rat::zero());
    }

    #[test]
    fn directed_conversions_bracket() {
        let r = Rat::new(1, 3);
        assert!(r.to_f64_floor() <= r.to_f64_ceil());
        assert!(r.to_f64_floor() < r.to_f64_ceil());
    }
}
