//! Interval evaluation of homogeneous lifts at the archimedean place.

use crate::algebra::{MultiPoly, Rat};
use crate::interval::Interval;

pub(crate) struct IntervalMap {
    comps: Vec<Vec<(Vec<u32>, Interval)>>,
    max_exp: Vec<u32>,
}

impl IntervalMap {
    pub(crate) fn new(comps: &[MultiPoly]) -> Self {
        let nvars = comps.first().map_or(0, MultiPoly::nvars);
        let mut max_exp = vec![0u32; nvars];
        let comps = comps
            .iter()
            .map(|c| {
                c.terms()
                    .map(|(m, a)| {
                        for (k, &e) in m.exps().iter().enumerate() {
                            max_exp[k] = max_exp[k].max(e);
                        }
                        (m.exps().to_vec(), Interval::from_rat(a))
                    })
                    .collect()
            })
            .collect();
        IntervalMap { comps, max_exp }
    }

    pub(crate) fn eval(&self, v: &[Interval]) -> Vec<Interval> {
        let powers: Vec<Vec<Interval>> = v
            .iter()
            .zip(&self.max_exp)
            .map(|(x, &m)| (0..=m).map(|e| x.powu(e)).collect())
            .collect();
        self.comps
            .iter()
            .map(|comp| {
                comp.iter().fold(Interval::zero(), |acc, (exps, c)| {
                    let t = exps
                        .iter()
                        .enumerate()
                        .fold(*c, |t, (i, &e)| if e == 0 { t } else { t * powers[i][e as usize] });
                    acc + t
                })
            })
            .collect()
    }
}

/// `[max_i mig(v_i), max_i mag(v_i)]`.
pub(crate) fn sup_norm(v: &[Interval]) -> Interval {
    let lo = v.iter().map(Interval::mig).fold(0.0, f64::max);
    let hi = v.iter().map(Interval::mag).fold(0.0, f64::max);
    Interval { lo, hi }
}

/// `(y, 1) / max(||y||, 1)` together with `log max(||y||, 1)`.
pub(crate) fn normalized_lift(y: &[Rat]) -> (Vec<Interval>, Interval) {
    let m = y.iter().map(Rat::abs).fold(Rat::one(), Rat::max);
    let inv = m.recip();
    let mut v: Vec<Interval> = y.iter().map(|c| Interval::from_rat(&(c * &inv))).collect();
    v.push(Interval::from_rat(&inv));
    (v, Interval::ln_rat(&m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_henon_lift() {
        let f = crate::automorphism::PolyMap::parse(&["y", "y^2 - x"], &["x", "y"]).unwrap();
        let m = IntervalMap::new(&f.projective_components());
        let (v, l) = normalized_lift(&[Rat::zero(), Rat::from_i64(2)]);
        assert!(l.contains(2f64.ln()));
        let u = m.eval(&v);
        // F(0, 1, 1/2) = (1/2, 1, 1/4).
        assert!(u[0].contains(0.5) && u[1].contains(1.0) && u[2].contains(0.25));
        assert!(sup_norm(&u).contains(1.0));
    }
}
