//! Outward-rounded `f64` intervals.
//!
//! Every operation widens its result by at least one ulp on each side, so
//! the true real result of the exact operation on any members of the
//! operands is contained in the output. Logarithms are widened further by
//! a relative slack of 2^-50 to absorb libm error.

use std::ops::{Add, Mul, Neg, Sub};

use malachite::num::logic::traits::SignificantBits;
use malachite::Natural;
use serde::{Deserialize, Serialize};

use crate::algebra::Rat;

pub const LOG_SLACK: f64 = 1.0 / (1u64 << 50) as f64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(!(lo > hi), "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn zero() -> Self {
        Self::point(0.0)
    }

    pub fn from_rat(r: &Rat) -> Self {
        Interval {
            lo: r.to_f64_floor(),
            hi: r.to_f64_ceil(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Largest absolute value of a member.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value of a member.
    pub fn mig(&self) -> f64 {
        if self.lo <= 0.0 && self.hi >= 0.0 {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(&self) -> Self {
        Interval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    pub fn max(&self, o: &Interval) -> Self {
        Interval {
            lo: self.lo.max(o.lo),
            hi: self.hi.max(o.hi),
        }
    }

    pub fn min(&self, o: &Interval) -> Self {
        Interval {
            lo: self.lo.min(o.lo),
            hi: self.hi.min(o.hi),
        }
    }

    pub fn recip(&self) -> Self {
        assert!(self.lo > 0.0 || self.hi < 0.0, "reciprocal of interval containing zero");
        Interval {
            lo: down(1.0 / self.hi),
            hi: up(1.0 / self.lo),
        }
    }

    pub fn div(&self, o: &Interval) -> Self {
        *self * o.recip()
    }

    pub fn powu(&self, e: u32) -> Self {
        if e == 0 {
            return Interval::point(1.0);
        }
        let base = if e.is_multiple_of(2) { self.abs() } else { *self };
        let mut acc = base;
        for _ in 1..e {
            acc = acc * base;
        }
        if e.is_multiple_of(2) {
            acc.lo = acc.lo.max(0.0);
        }
        acc
    }

    /// Natural logarithm; the interval must be strictly positive.
    pub fn ln(&self) -> Option<Self> {
        if !(self.lo > 0.0) || !self.hi.is_finite() {
            return None;
        }
        let a = self.lo.ln();
        let b = self.hi.ln();
        Some(Interval {
            lo: down(down(a - a.abs() * LOG_SLACK)),
            hi: up(up(b + b.abs() * LOG_SLACK)),
        })
    }

    /// Natural logarithm of a positive integer, valid for any size.
    pub fn ln_natural(n: &Natural) -> Self {
        assert!(*n != 0u32, "log of zero");
        let bits = n.significant_bits();
        if bits <= 53 {
            let v = u64::try_from(n).expect("fits in u64") as f64;
            return Interval::point(v).ln().expect("positive");
        }
        let shift = bits.saturating_sub(60);
        let top = u64::try_from(&(n >> shift)).expect("fits in u64");
        let m = Interval {
            lo: down(top as f64),
            hi: up((top + 1) as f64),
        };
        m.ln().expect("positive") + Interval::ln2() * Interval::point(shift as f64)
    }

    /// Natural logarithm of a positive rational.
    pub fn ln_rat(r: &Rat) -> Self {
        assert!(r.signum() == std::cmp::Ordering::Greater, "log of nonpositive rational");
        Self::ln_natural(r.numer()) - Self::ln_natural(r.denom())
    }

    pub fn ln2() -> Self {
        Interval {
            lo: down(std::f64::consts::LN_2),
            hi: up(std::f64::consts::LN_2),
        }
    }

    /// Hull of two intervals.
    pub fn hull(&self, o: &Interval) -> Self {
        Interval {
            lo: self.lo.min(o.lo),
            hi: self.hi.max(o.hi),
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval {
            lo: down(self.lo + o.lo),
            hi: up(self.hi + o.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval {
            lo: down(self.lo - o.hi),
            hi: up(self.hi - o.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let p = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }
}

impl<'a> Mul<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        *self * *o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn ln_of_big_integer_brackets_truth() {
        let n = Natural::from_str("1000000000000000000000000000000").unwrap();
        let i = Interval::ln_natural(&n);
        let truth = 30.0 * std::f64::consts::LN_10;
        assert!(i.contains(truth));
        assert!(i.width() < 1e-9);
    }

    #[test]
    fn products_contain_truth() {
        let a = Interval::from_rat(&Rat::new(1, 3));
        let b = Interval::from_rat(&Rat::new(-2, 7));
        let c = a * b;
        assert!(c.lo <= -2.0 / 21.0 && -2.0 / 21.0 <= c.hi);
    }

    #[test]
    fn even_power_of_straddling_interval() {
        let a = Interval::new(-1.0, 0.5);
        let s = a.powu(2);
        assert_eq!(s.lo, 0.0);
        assert!(s.hi >= 1.0);
    }

    #[test]
    fn ln_of_integers_from_50_to_70_bits() {
        for bits in 50..70u64 {
            let n = (Natural::from(1u32) << bits) + Natural::from(12345u32);
            let i = Interval::ln_natural(&n);
            let truth = bits as f64 * std::f64::consts::LN_2 + (12345.0 / 2f64.powi(bits as i32)).ln_1p();
            assert!(i.contains(truth), "{bits}");
            assert!(i.width() < 1e-12);
        }
    }
}
