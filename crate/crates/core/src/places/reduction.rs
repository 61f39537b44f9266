use serde::{Deserialize, Serialize};

use super::primes::prime_factors;
use super::{valuation, Place};
use crate::algebra::forms::{binary_form_gcd, BinaryForm, Fp};
use crate::algebra::{MultiPoly, Rat};
use crate::automorphism::{PolyMap, RegularAutomorphism};
use crate::certificate::Certificate;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Good,
    Bad { reason: String },
    Undecided { reason: String },
}

/// Outcome of the good-reduction test at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub prime: u64,
    pub integral_forward: bool,
    pub integral_inverse: bool,
    pub degree_preserved_forward: bool,
    pub degree_preserved_inverse: bool,
    /// `None` when the reduction's regularity could not be decided.
    pub reduced_regular: Option<bool>,
    pub verdict: Verdict,
}

fn is_integral(c: &Rat, p: u64) -> bool {
    valuation(c, p).is_none_or(|v| v >= 0)
}

fn is_unit(c: &Rat, p: u64) -> bool {
    valuation(c, p) == Some(0)
}

fn reduce(c: &Rat, p: u64) -> Fp {
    let pn = malachite::Natural::from(p);
    let n = u64::try_from(&(c.numer() % &pn)).expect("reduced below p");
    let d = u64::try_from(&(c.denom() % &pn)).expect("reduced below p");
    let mut v = Fp::new(n, p);
    if c.is_negative() {
        v = Fp::new((p - v.v) % p, p);
    }
    use crate::algebra::forms::Field;
    v.mul(&Fp::new(d, p).inv())
}

fn reduced_forms(map: &PolyMap, p: u64) -> Vec<BinaryForm<Fp>> {
    let d = map.degree();
    map.top_forms()
        .iter()
        .map(|t| BinaryForm {
            coeffs: (0..=d).map(|i| reduce(&t.coeff(&[d - i, i]), p)).collect(),
        })
        .collect()
}

/// Test conditions (i)-(iii) of good reduction at the prime `p`.
pub fn good_reduction_test(aut: &RegularAutomorphism, cert: &Certificate, p: u64) -> ReductionReport {
    let f = aut.forward();
    let g = aut.inverse();
    let integral_forward = f.coefficients().all(|c| is_integral(c, p));
    let integral_inverse = g.coefficients().all(|c| is_integral(c, p));
    let top_unit = |m: &PolyMap| {
        m.top_forms()
            .iter()
            .flat_map(MultiPoly::coefficients)
            .any(|c| is_unit(c, p))
    };
    let degree_preserved_forward = integral_forward && top_unit(f);
    let degree_preserved_inverse = integral_inverse && top_unit(g);
    let reductions_defined = degree_preserved_forward && degree_preserved_inverse;
    let reduced_regular = if cert.coefficients().all(|c| is_integral(c, p)) {
        Some(true)
    } else if !reductions_defined {
        None
    } else if aut.dim() == 2 {
        let mut forms = reduced_forms(f, p);
        forms.extend(reduced_forms(g, p));
        Some(binary_form_gcd(&forms).is_some_and(|h| h.is_constant()))
    } else {
        None
    };
    let verdict = if !integral_forward {
        Verdict::Bad {
            reason: "(i) forward map has a non-integral coefficient".into(),
        }
    } else if !integral_inverse {
        Verdict::Bad {
            reason: "(i) inverse map has a non-integral coefficient".into(),
        }
    } else if !degree_preserved_forward {
        Verdict::Bad {
            reason: "(ii) forward degree drops mod p".into(),
        }
    } else if !degree_preserved_inverse {
        Verdict::Bad {
            reason: "(ii) inverse degree drops mod p".into(),
        }
    } else {
        match reduced_regular {
            Some(true) => Verdict::Good,
            Some(false) => Verdict::Bad {
                reason: "(iii) reduced top forms share a zero".into(),
            },
            None => Verdict::Undecided {
                reason: "(iii) certificate not p-integral and no top-form test in this dimension"
                    .into(),
            },
        }
    };
    ReductionReport {
        prime: p,
        integral_forward,
        integral_inverse,
        degree_preserved_forward,
        degree_preserved_inverse,
        reduced_regular,
        verdict,
    }
}

/// Primes dividing a denominator of `f`, `f^-1` or the certificate, or a
/// numerator of a top-degree coefficient. Every other prime is good.
pub fn candidate_bad_primes(aut: &RegularAutomorphism, cert: &Certificate) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let coeffs = aut
        .forward()
        .coefficients()
        .chain(aut.inverse().coefficients())
        .chain(cert.coefficients());
    for c in coeffs {
        out.extend(prime_factors(c.denom())?);
    }
    for m in [aut.forward(), aut.inverse()] {
        for t in m.top_forms() {
            for c in t.coefficients() {
                out.extend(prime_factors(c.numer())?);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// The primes of bad or undecided reduction, each with its report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPlaceSet {
    pub entries: Vec<ReductionReport>,
}

impl BadPlaceSet {
    pub fn primes(&self) -> Vec<u64> {
        self.entries.iter().map(|r| r.prime).collect()
    }

    pub fn places(&self) -> Vec<Place> {
        self.entries.iter().map(|r| Place::Finite(r.prime)).collect()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.entries.iter().any(|r| r.prime == p)
    }

    pub fn is_undecided(&self, p: u64) -> bool {
        self.entries
            .iter()
            .any(|r| r.prime == p && matches!(r.verdict, Verdict::Undecided { .. }))
    }
}

pub fn bad_place_set(aut: &RegularAutomorphism, cert: &Certificate) -> Result<BadPlaceSet> {
    let entries = candidate_bad_primes(aut, cert)?
        .into_iter()
        .map(|p| good_reduction_test(aut, cert, p))
        .filter(|r| r.verdict != Verdict::Good)
        .collect();
    Ok(BadPlaceSet { entries })
}
