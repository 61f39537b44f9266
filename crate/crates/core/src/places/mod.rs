//! Places of Q, absolute values, norms and good reduction.

pub mod primes;
mod reduction;

use std::fmt;
use std::str::FromStr;

use malachite::num::arithmetic::traits::{DivExact, DivisibleBy, Square};
use malachite::Natural;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::Rat;
use crate::error::{Error, Result};
use crate::interval::Interval;

pub use reduction::{
    bad_place_set, candidate_bad_primes, good_reduction_test, BadPlaceSet, ReductionReport,
    Verdict,
};

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Archimedean,
    Finite(u64),
}

impl Place {
    /// Finite place; `p` must be prime.
    pub fn finite(p: u64) -> Result<Place> {
        if primes::is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::Input(format!("{p} is not prime")))
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Archimedean => None,
            Place::Finite(p) => Some(*p),
        }
    }

    /// `|r|_v` as an exact rational.
    pub fn abs(&self, r: &Rat) -> Rat {
        match self {
            Place::Archimedean => r.abs(),
            Place::Finite(p) => match valuation(r, *p) {
                None => Rat::zero(),
                Some(v) => Rat::from_u64(*p).powi(-v),
            },
        }
    }

    /// `max_i |x_i|_v`.
    pub fn norm(&self, x: &[Rat]) -> Rat {
        match self {
            Place::Archimedean => x.iter().map(Rat::abs).max().unwrap_or_else(Rat::zero),
            Place::Finite(p) => match min_valuation(x, *p) {
                None => Rat::zero(),
                Some(v) => Rat::from_u64(*p).powi(-v),
            },
        }
    }

    /// `max(||x||_v, 1)`.
    pub fn norm_plus(&self, x: &[Rat]) -> Rat {
        Rat::max(self.norm(x), Rat::one())
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Place> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(Place::Archimedean);
        }
        let p: u64 = t
            .parse()
            .map_err(|_| Error::Input(format!("invalid place `{s}`")))?;
        Place::finite(p)
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exponent of `p` in `n > 0`.
pub fn nat_valuation(n: &Natural, p: u64) -> u64 {
    assert!(*n != 0u32, "valuation of zero");
    let pn = Natural::from(p);
    if !n.divisible_by(&pn) {
        return 0;
    }
    // Divide by p, p^2, p^4, ... while possible, then back down.
    let mut m = n.clone();
    let mut powers = vec![pn];
    let mut v = 0u64;
    loop {
        let k = powers.len() - 1;
        if (&m).divisible_by(&powers[k]) {
            m = m.div_exact(&powers[k]);
            v += 1 << k;
            let next = (&powers[k]).square();
            if next > m {
                break;
            }
            powers.push(next);
        } else {
            break;
        }
    }
    for k in (0..powers.len()).rev() {
        if (&m).divisible_by(&powers[k]) {
            m = m.div_exact(&powers[k]);
            v += 1 << k;
        }
    }
    v
}

/// `v_p(r)`, or `None` for zero.
pub fn valuation(r: &Rat, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(nat_valuation(r.numer(), p) as i64 - nat_valuation(r.denom(), p) as i64)
}

/// Smallest valuation among the coordinates, `None` if all vanish.
pub fn min_valuation(x: &[Rat], p: u64) -> Option<i64> {
    x.iter().filter_map(|c| valuation(c, p)).min()
}

/// `log+ ||x||_v`, exact as a multiple of `log p` at finite places.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogNorm {
    pub place: Place,
    pub value: f64,
    /// `value = log_p_multiple * log p` at finite places.
    pub log_p_multiple: Option<i64>,
}

pub fn point_lognorm(x: &[Rat], place: Place) -> LogNorm {
    match place {
        Place::Archimedean => {
            let n = place.norm_plus(x);
            LogNorm {
                place,
                value: Interval::ln_rat(&n).mid(),
                log_p_multiple: None,
            }
        }
        Place::Finite(p) => {
            let k = min_valuation(x, p).map_or(0, |v| (-v).max(0));
            LogNorm {
                place,
                value: k as f64 * (p as f64).ln(),
                log_p_multiple: Some(k),
            }
        }
    }
}

/// A constant `coef * log(arg)`. At finite places `arg` is the prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogConst {
    pub coef: Rat,
    pub arg: Rat,
}

impl LogConst {
    pub fn zero() -> Self {
        LogConst {
            coef: Rat::zero(),
            arg: Rat::one(),
        }
    }

    /// `coef * log(arg)` normalised to a multiple of `log p` at finite
    /// places (`arg` must then be a power of `p`).
    pub fn new(coef: Rat, arg: Rat, place: Place) -> Self {
        assert!(arg.signum() == std::cmp::Ordering::Greater, "log of nonpositive value");
        if coef.is_zero() || arg.is_one() {
            return Self::zero();
        }
        match place {
            Place::Archimedean => LogConst { coef, arg },
            Place::Finite(p) => {
                let j = valuation(&arg, p).expect("nonzero");
                assert_eq!(
                    Rat::from_u64(p).powi(j),
                    arg,
                    "finite-place constant is not a power of p"
                );
                LogConst {
                    coef: coef * Rat::from_i64(j),
                    arg: Rat::from_u64(p),
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero() || self.arg.is_one()
    }

    pub fn interval(&self) -> Interval {
        if self.is_zero() {
            return Interval::zero();
        }
        Interval::from_rat(&self.coef) * Interval::ln_rat(&self.arg)
    }

    pub fn value(&self) -> f64 {
        self.interval().mid()
    }

    /// Coefficient of `log p` when this constant lives at the finite place `p`.
    pub fn log_p_coef(&self, p: u64) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        assert_eq!(self.arg, Rat::from_u64(p), "constant is not a multiple of log p");
        self.coef.clone()
    }
}
