//! p-adic numbers with exact valuation and a unit known modulo `p^prec`.

use malachite::num::arithmetic::traits::{DivExact, ModInverse, Pow};
use malachite::num::basic::traits::Zero;
use malachite::Natural;

use crate::algebra::{MultiPoly, Rat};
use crate::places::nat_valuation;

/// Valuations beyond this magnitude are treated as overflow.
const VAL_LIMIT: i64 = 1 << 60;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum PAdic {
    Zero,
    /// `p^val * unit + O(p^(val + prec))`, `prec >= 1`, `unit` a p-adic unit
    /// reduced modulo `p^prec`.
    Approx { val: i64, unit: Natural, prec: u32 },
    /// Only known to be divisible by `p^bound`.
    Small { bound: i64 },
}

pub(crate) struct Ctx {
    p: u64,
    prec: u32,
    powers: Vec<Natural>,
}

impl Ctx {
    pub(crate) fn new(p: u64, prec: u32) -> Self {
        let pn = Natural::from(p);
        let powers = (0..=prec).map(|k| (&pn).pow(k as u64)).collect();
        Ctx { p, prec, powers }
    }

    fn pk(&self, k: u32) -> &Natural {
        &self.powers[k as usize]
    }

    pub(crate) fn from_rat(&self, r: &Rat) -> PAdic {
        if r.is_zero() {
            return PAdic::Zero;
        }
        let a = nat_valuation(r.numer(), self.p);
        let b = nat_valuation(r.denom(), self.p);
        let m = self.pk(self.prec);
        let pn = Natural::from(self.p);
        let num = r.numer().clone().div_exact((&pn).pow(a)) % m;
        let den = r.denom().clone().div_exact((&pn).pow(b)) % m;
        let inv = den.mod_inverse(m).expect("unit is invertible");
        let mut unit = (num * inv) % m;
        if r.is_negative() {
            unit = m - unit;
        }
        PAdic::Approx {
            val: a as i64 - b as i64,
            unit,
            prec: self.prec,
        }
    }

    pub(crate) fn mul(&self, a: &PAdic, b: &PAdic) -> Option<PAdic> {
        use PAdic::*;
        let out = match (a, b) {
            (Zero, _) | (_, Zero) => Zero,
            (Small { bound: x }, Small { bound: y }) => Small { bound: x + y },
            (Small { bound }, Approx { val, .. }) | (Approx { val, .. }, Small { bound }) => {
                Small { bound: bound + val }
            }
            (
                Approx {
                    val: v1,
                    unit: u1,
                    prec: p1,
                },
                Approx {
                    val: v2,
                    unit: u2,
                    prec: p2,
                },
            ) => {
                let prec = (*p1).min(*p2);
                Approx {
                    val: v1 + v2,
                    unit: (u1 * u2) % self.pk(prec),
                    prec,
                }
            }
        };
        in_range(out)
    }

    pub(crate) fn sum(&self, terms: &[PAdic]) -> Option<PAdic> {
        let mut abs_prec = i64::MAX;
        let mut vmin = i64::MAX;
        for t in terms {
            match t {
                PAdic::Zero => {}
                PAdic::Small { bound } => abs_prec = abs_prec.min(*bound),
                PAdic::Approx { val, prec, .. } => {
                    abs_prec = abs_prec.min(val + *prec as i64);
                    vmin = vmin.min(*val);
                }
            }
        }
        if vmin == i64::MAX {
            return Some(if abs_prec == i64::MAX {
                PAdic::Zero
            } else {
                PAdic::Small { bound: abs_prec }
            });
        }
        if vmin >= abs_prec {
            return Some(PAdic::Small { bound: abs_prec });
        }
        let k = (abs_prec - vmin) as u32;
        let m = self.pk(k);
        let mut s = Natural::ZERO;
        for t in terms {
            if let PAdic::Approx { val, unit, .. } = t {
                let shift = (val - vmin) as u32;
                if shift < k {
                    s += unit * self.pk(shift);
                }
            }
        }
        s %= m;
        if s == 0u32 {
            return Some(PAdic::Small { bound: abs_prec });
        }
        let sv = nat_valuation(&s, self.p) as u32;
        let prec = k - sv;
        let unit = s.div_exact(self.pk(sv)) % self.pk(prec);
        in_range(PAdic::Approx {
            val: vmin + sv as i64,
            unit,
            prec,
        })
    }
}

fn in_range(x: PAdic) -> Option<PAdic> {
    match &x {
        PAdic::Approx { val, .. } | PAdic::Small { bound: val } if val.abs() > VAL_LIMIT => None,
        _ => Some(x),
    }
}

/// A polynomial map with coefficients converted once.
pub(crate) struct PAdicMap {
    comps: Vec<Vec<(Vec<u32>, PAdic)>>,
}

impl PAdicMap {
    pub(crate) fn new(ctx: &Ctx, comps: &[MultiPoly]) -> Self {
        PAdicMap {
            comps: comps
                .iter()
                .map(|c| {
                    c.terms()
                        .map(|(m, a)| (m.exps().to_vec(), ctx.from_rat(a)))
                        .collect()
                })
                .collect(),
        }
    }

    pub(crate) fn eval(&self, ctx: &Ctx, y: &[PAdic]) -> Option<Vec<PAdic>> {
        let mut powers: Vec<Vec<PAdic>> = y.iter().map(|v| vec![v.clone()]).collect();
        let mut out = Vec::with_capacity(self.comps.len());
        for comp in &self.comps {
            let mut terms = Vec::with_capacity(comp.len());
            for (exps, c) in comp {
                let mut t = c.clone();
                for (i, &e) in exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    while powers[i].len() < e as usize {
                        let next = ctx.mul(powers[i].last().unwrap(), &powers[i][0])?;
                        powers[i].push(next);
                    }
                    t = ctx.mul(&t, &powers[i][e as usize - 1])?;
                }
                terms.push(t);
            }
            out.push(ctx.sum(&terms)?);
        }
        Some(out)
    }
}

/// What is known about `||y||_p` for a p-adic vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct NormInfo {
    /// Exact `log+ ||y|| / log p` when determined.
    pub log_plus: Option<i64>,
    /// Upper bound for `log ||y|| / log p`; `None` for the zero vector.
    pub log_upper: Option<i64>,
}

pub(crate) fn norm_info(y: &[PAdic]) -> NormInfo {
    let mut vmin: Option<i64> = None;
    let mut bmin: Option<i64> = None;
    for c in y {
        match c {
            PAdic::Zero => {}
            PAdic::Approx { val, .. } => vmin = Some(vmin.map_or(*val, |v| v.min(*val))),
            PAdic::Small { bound } => bmin = Some(bmin.map_or(*bound, |b| b.min(*bound))),
        }
    }
    let lower_val = match (vmin, bmin) {
        (None, None) => None,
        (Some(v), None) => Some(v),
        (None, Some(b)) => Some(b),
        (Some(v), Some(b)) => Some(v.min(b)),
    };
    let log_upper = lower_val.map(|v| -v);
    let log_plus = match (vmin, bmin) {
        (_, Some(b)) if vmin.is_none_or(|v| v > b) => {
            // The unknown coordinates could dominate; exact only below 1.
            if b >= 0 && vmin.is_none_or(|v| v >= 0) {
                Some(0)
            } else {
                None
            }
        }
        (Some(v), _) => Some((-v).max(0)),
        (None, None) => Some(0),
        (None, Some(_)) => unreachable!(),
    };
    NormInfo {
        log_plus,
        log_upper,
    }
}
