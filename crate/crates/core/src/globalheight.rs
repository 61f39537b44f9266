//! Weil height, canonical heights as sums of local Green functions,
//! periodicity, the growth inequality and orbit counting.

use std::collections::BTreeSet;

use malachite::num::arithmetic::traits::Lcm;
use malachite::Natural;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{point_bits, render_point, Rat};
use crate::automorphism::{RegularAutomorphism, DEFAULT_BIT_BUDGET};
use crate::certificate::{place_constants, Certificate};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::localgreen::{Direction, GreenConfig, GreenValue, LocalDynamics};
use crate::places::primes::prime_factors;
use crate::places::{bad_place_set, Place};

/// `log max(|a_1|, ..., |a_N|, b)` where `x = (a_1/b, ..., a_N/b)` in lowest
/// terms, as a certified interval.
pub fn weil_height_interval(x: &[Rat]) -> Interval {
    let top = height_integer(x);
    if top == 1u32 {
        return Interval::zero();
    }
    Interval::ln_natural(&top)
}

fn height_integer(x: &[Rat]) -> Natural {
    let l = x
        .iter()
        .fold(Natural::from(1u32), |acc, c| acc.lcm(c.denom()));
    x.iter()
        .map(|c| c.numer() * &(&l / c.denom()))
        .fold(l.clone(), |m, v| if v > m { v } else { m })
}

pub fn weil_height(x: &[Rat]) -> f64 {
    weil_height_interval(x).mid()
}

/// A value with a certified error radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedReal {
    pub value: f64,
    pub radius: f64,
}

impl CertifiedReal {
    pub fn exact(value: f64) -> Self {
        CertifiedReal { value, radius: 0.0 }
    }

    pub fn contains(&self, t: f64) -> bool {
        (t - self.value).abs() <= self.radius
    }

    fn sum<I: IntoIterator<Item = CertifiedReal>>(it: I) -> Self {
        let mut value = 0.0f64;
        let mut radius = 0.0f64;
        let mut count = 0u32;
        let mut scale = 0.0f64;
        for c in it {
            value += c.value;
            radius += c.radius;
            scale += c.value.abs();
            count += 1;
        }
        // Rounding of the float sums.
        radius += scale * f64::EPSILON * (count as f64 + 1.0);
        CertifiedReal {
            value,
            radius: radius.next_up(),
        }
    }
}

impl From<&GreenValue> for CertifiedReal {
    fn from(g: &GreenValue) -> Self {
        CertifiedReal {
            value: g.value,
            radius: g.error_radius,
        }
    }
}

/// `G_{f,v}(x)` and `G_{f^-1,v}(x)` at one place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceHeights {
    pub place: Place,
    pub forward: GreenValue,
    pub backward: GreenValue,
}

/// `h(f^n x)/d^n` and `h(f^-n x)/d-^n` for the largest `n` within budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectEstimate {
    pub forward_iterations: u32,
    pub backward_iterations: u32,
    pub h_plus: f64,
    pub h_minus: f64,
    pub discrepancy_plus: f64,
    pub discrepancy_minus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightReport {
    pub point: String,
    pub weil_height: f64,
    pub h_plus: CertifiedReal,
    pub h_minus: CertifiedReal,
    pub h_f: CertifiedReal,
    pub h_tilde: CertifiedReal,
    pub per_place: Vec<PlaceHeights>,
    pub places_used: Vec<Place>,
    pub direct: Option<DirectEstimate>,
}

impl HeightReport {
    pub fn place(&self, place: Place) -> Option<&PlaceHeights> {
        self.per_place.iter().find(|p| p.place == place)
    }

    /// `G_{f,v}(x)`; zero at places outside the support.
    pub fn forward_at(&self, place: Place) -> CertifiedReal {
        self.place(place)
            .map_or(CertifiedReal::exact(0.0), |p| (&p.forward).into())
    }

    pub fn backward_at(&self, place: Place) -> CertifiedReal {
        self.place(place)
            .map_or(CertifiedReal::exact(0.0), |p| (&p.backward).into())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightConfig {
    /// Bound for the total error radius of each of `h_plus` and `h_minus`.
    pub tolerance: f64,
    pub green: GreenConfig,
    /// Iterations of the direct-limit estimate; 0 disables it.
    pub direct_iterations: u32,
    pub direct_bits: u64,
    pub parallel: bool,
}

impl Default for HeightConfig {
    fn default() -> Self {
        HeightConfig {
            tolerance: 1e-8,
            green: GreenConfig::default(),
            direct_iterations: 18,
            direct_bits: 1 << 21,
            parallel: true,
        }
    }
}

impl HeightConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        HeightConfig {
            tolerance,
            ..Self::default()
        }
    }

    pub fn without_direct(mut self) -> Self {
        self.direct_iterations = 0;
        self
    }
}

/// The places where `G_{f,v}` or `G_{f^-1,v}` can be nonzero at `x`: infinity,
/// the bad primes, and primes dividing a denominator of `x`.
pub fn support_places(aut: &RegularAutomorphism, cert: &Certificate, x: &[Rat]) -> Result<Vec<Place>> {
    let mut set = BTreeSet::new();
    set.insert(Place::Archimedean);
    for p in bad_place_set(aut, cert)?.primes() {
        set.insert(Place::Finite(p));
    }
    for c in x {
        for p in prime_factors(c.denom())? {
            set.insert(Place::Finite(p));
        }
    }
    Ok(set.into_iter().collect())
}

fn direct_estimate(aut: &RegularAutomorphism, x: &[Rat], cfg: &HeightConfig) -> Result<(u32, f64, u32, f64)> {
    let run = |direction: Direction| -> Result<(u32, f64)> {
        let (map, d) = match direction {
            Direction::Forward => (aut.forward(), aut.d()),
            Direction::Backward => (aut.inverse(), aut.d_minus()),
        };
        let mut y = x.to_vec();
        let mut n = 0;
        while n < cfg.direct_iterations {
            let next = map.eval(&y)?;
            if point_bits(&next) > cfg.direct_bits {
                break;
            }
            y = next;
            n += 1;
        }
        Ok((n, weil_height(&y) / (d as f64).powi(n as i32)))
    };
    let (nf, hf) = run(Direction::Forward)?;
    let (nb, hb) = run(Direction::Backward)?;
    Ok((nf, hf, nb, hb))
}

/// `ĥ+`, `ĥ-`, `ĥ_f` and `h̃_f` at `x`, assembled from local Green functions.
pub fn canonical_heights(
    aut: &RegularAutomorphism,
    cert: &Certificate,
    x: &[Rat],
    cfg: &HeightConfig,
) -> Result<HeightReport> {
    if x.len() != aut.dim() {
        return Err(Error::DimensionMismatch {
            expected: aut.dim(),
            found: x.len(),
        });
    }
    let places = support_places(aut, cert, x)?;
    let gcfg = GreenConfig {
        tolerance: cfg.tolerance / places.len() as f64,
        ..cfg.green.clone()
    };
    let eval = |&place: &Place| -> Result<(PlaceHeights, bool)> {
        let local = LocalDynamics::new(aut, cert, place);
        let mut short = false;
        let mut one = |dir| match local.green(x, dir, &gcfg) {
            Ok(v) => Ok(v),
            Err(Error::GreenBudget { partial }) => {
                short = true;
                Ok(*partial)
            }
            Err(e) => Err(e),
        };
        let forward = one(Direction::Forward)?;
        let backward = one(Direction::Backward)?;
        Ok((
            PlaceHeights {
                place,
                forward,
                backward,
            },
            short,
        ))
    };
    let results: Vec<Result<(PlaceHeights, bool)>> = if cfg.parallel {
        places.par_iter().map(eval).collect()
    } else {
        places.iter().map(eval).collect()
    };
    let mut per_place = Vec::with_capacity(places.len());
    let mut incomplete = Vec::new();
    for r in results {
        let (ph, short) = r?;
        if short {
            incomplete.push(ph.place);
        }
        per_place.push(ph);
    }
    let h_plus = CertifiedReal::sum(per_place.iter().map(|p| (&p.forward).into()));
    let h_minus = CertifiedReal::sum(per_place.iter().map(|p| (&p.backward).into()));
    let h_f = CertifiedReal::sum([h_plus, h_minus]);
    let h_tilde = CertifiedReal::sum(per_place.iter().map(|p| CertifiedReal {
        value: p.forward.value.max(p.backward.value),
        radius: p.forward.error_radius.max(p.backward.error_radius),
    }));
    let direct = if cfg.direct_iterations > 0 {
        let (nf, hf, nb, hb) = direct_estimate(aut, x, cfg)?;
        Some(DirectEstimate {
            forward_iterations: nf,
            backward_iterations: nb,
            h_plus: hf,
            h_minus: hb,
            discrepancy_plus: hf - h_plus.value,
            discrepancy_minus: hb - h_minus.value,
        })
    } else {
        None
    };
    let report = HeightReport {
        point: render_point(x),
        weil_height: weil_height(x),
        h_plus,
        h_minus,
        h_f,
        h_tilde,
        per_place,
        places_used: places,
        direct,
    };
    if incomplete.is_empty() {
        Ok(report)
    } else {
        let list: Vec<String> = incomplete.iter().map(Place::to_string).collect();
        Err(Error::HeightBudget {
            reason: format!("local tolerance not reached at {}", list.join(", ")),
            partial: Box::new(report),
        })
    }
}

/// Residual of one local functional equation with its error bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceResidual {
    pub place: Place,
    /// `G_f(f x) - d G_f(x)`.
    pub forward_residual: f64,
    pub forward_bound: f64,
    /// `G_{f^-1}(f x) - G_{f^-1}(x) / d-`.
    pub backward_residual: f64,
    pub backward_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEquation {
    /// `ĥ(f x)/d + ĥ(f^-1 x)/d- - (1 + 1/(d d-)) ĥ(x)`.
    pub residual: f64,
    pub bound: f64,
    pub per_place: Vec<PlaceResidual>,
}

pub fn functional_equation_check(
    aut: &RegularAutomorphism,
    cert: &Certificate,
    x: &[Rat],
    cfg: &HeightConfig,
) -> Result<FunctionalEquation> {
    let fx = aut.forward().eval(x)?;
    let gx = aut.inverse().eval(x)?;
    let r0 = canonical_heights(aut, cert, x, cfg)?;
    let r1 = canonical_heights(aut, cert, &fx, cfg)?;
    let r2 = canonical_heights(aut, cert, &gx, cfg)?;
    let d = aut.d() as f64;
    let dm = aut.d_minus() as f64;
    let k = 1.0 + 1.0 / (d * dm);
    let residual = r1.h_f.value / d + r2.h_f.value / dm - k * r0.h_f.value;
    let slack = (r1.h_f.value / d + r2.h_f.value / dm + k * r0.h_f.value) * 4.0 * f64::EPSILON;
    let bound = r1.h_f.radius / d + r2.h_f.radius / dm + k * r0.h_f.radius + slack;
    let places: BTreeSet<Place> = r0
        .places_used
        .iter()
        .chain(&r1.places_used)
        .copied()
        .collect();
    let per_place = places
        .into_iter()
        .map(|place| {
            let (a, b) = (r0.forward_at(place), r1.forward_at(place));
            let (c, e) = (r0.backward_at(place), r1.backward_at(place));
            let eps = |u: f64, v: f64| (u.abs() + v.abs()) * 4.0 * f64::EPSILON;
            PlaceResidual {
                place,
                forward_residual: b.value - d * a.value,
                forward_bound: b.radius + d * a.radius + eps(b.value, d * a.value),
                backward_residual: e.value - c.value / dm,
                backward_bound: e.radius + c.radius / dm + eps(e.value, c.value / dm),
            }
        })
        .collect();
    Ok(FunctionalEquation {
        residual,
        bound,
        per_place,
    })
}

/// `c = (1 + 1/(d d-)) Σ_{v∈S} (max{c_f, c_f^-1} - min{c+, c-})` over
/// infinity and the bad primes.
pub fn growth_constant(aut: &RegularAutomorphism, cert: &Certificate) -> Result<f64> {
    let mut places = vec![Place::Archimedean];
    places.extend(bad_place_set(aut, cert)?.places());
    let k = 1.0 + 1.0 / (aut.d() as f64 * aut.d_minus() as f64);
    let total: f64 = places
        .into_iter()
        .map(|place| {
            let c = place_constants(aut, cert, place);
            let upper = c.c_f.interval().max(&c.c_finv.interval()).hi;
            let lower = c.c_plus.interval().min(&c.c_minus.interval()).lo;
            upper - lower
        })
        .sum();
    Ok(k * total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthCheck {
    pub c: f64,
    /// `max (1 + 1/(d d-)) h(x) - c - h(f x)/d - h(f^-1 x)/d-` over the sample.
    pub max_violation: f64,
    pub worst_point: Option<String>,
}

fn growth_lhs(aut: &RegularAutomorphism, x: &[Rat]) -> Result<f64> {
    let fx = aut.forward().eval(x)?;
    let gx = aut.inverse().eval(x)?;
    Ok(weil_height(&fx) / aut.d() as f64 + weil_height(&gx) / aut.d_minus() as f64)
}

pub fn growth_inequality_check(
    aut: &RegularAutomorphism,
    cert: &Certificate,
    sample: &[Vec<Rat>],
) -> Result<GrowthCheck> {
    if sample.is_empty() {
        return Err(Error::Input("empty sample".into()));
    }
    let c = growth_constant(aut, cert)?;
    let k = 1.0 + 1.0 / (aut.d() as f64 * aut.d_minus() as f64);
    let mut max_violation = f64::NEG_INFINITY;
    let mut worst_point = None;
    for x in sample {
        let v = k * weil_height(x) - c - growth_lhs(aut, x)?;
        if v > max_violation {
            max_violation = v;
            worst_point = Some(render_point(x));
        }
    }
    Ok(GrowthCheck {
        c,
        max_violation,
        worst_point,
    })
}

/// `(h(f y)/d + h(f^-1 y)/d-) / h(y)` for `y = x, f(x), ..., f^k(x)`.
pub fn growth_ratio_probe(aut: &RegularAutomorphism, x: &[Rat], k: u32) -> Result<Vec<f64>> {
    let mut y = x.to_vec();
    let mut out = Vec::with_capacity(k as usize + 1);
    for _ in 0..=k {
        out.push(growth_lhs(aut, &y)? / weil_height(&y));
        y = aut.forward().eval(&y)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub representative: Vec<Rat>,
    pub is_periodic: bool,
    pub period: Option<u32>,
    /// `log ĥ+(x)/log d + log ĥ-(x)/log d-`, for infinite orbits.
    pub orbit_height: Option<f64>,
    pub h_f: Option<CertifiedReal>,
}

pub fn orbit_height(aut: &RegularAutomorphism, h_plus: f64, h_minus: f64) -> Result<f64> {
    if !(h_plus > 0.0 && h_minus > 0.0) {
        return Err(Error::Input("orbit height needs positive h_plus and h_minus".into()));
    }
    Ok(h_plus.ln() / (aut.d() as f64).ln() + h_minus.ln() / (aut.d_minus() as f64).ln())
}

/// Exact cycle search up to `max_period`, then a height certificate.
pub fn detect_periodic(
    aut: &RegularAutomorphism,
    cert: &Certificate,
    x: &[Rat],
    max_period: u32,
    cfg: &HeightConfig,
) -> Result<OrbitRecord> {
    let mut y = x.to_vec();
    for n in 1..=max_period {
        y = aut.forward().eval(&y)?;
        if y == x {
            return Ok(OrbitRecord {
                representative: x.to_vec(),
                is_periodic: true,
                period: Some(n),
                orbit_height: None,
                h_f: Some(CertifiedReal::exact(0.0)),
            });
        }
        if point_bits(&y) > DEFAULT_BIT_BUDGET {
            break;
        }
    }
    let r = canonical_heights(aut, cert, x, cfg)?;
    let certain = |c: &CertifiedReal| c.value > 3.0 * c.radius && c.value > 0.0;
    if certain(&r.h_f) && certain(&r.h_plus) && certain(&r.h_minus) {
        Ok(OrbitRecord {
            representative: x.to_vec(),
            is_periodic: false,
            period: None,
            orbit_height: Some(orbit_height(aut, r.h_plus.value, r.h_minus.value)?),
            h_f: Some(r.h_f),
        })
    } else {
        Err(Error::Undecided(format!(
            "no cycle of period <= {max_period} and h_f = {} +/- {} is not certified positive",
            r.h_f.value, r.h_f.radius
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitCountRow {
    pub log_t: f64,
    pub exact_count: u64,
    pub predicted: f64,
    pub residual: f64,
    /// The bit budget stopped enumeration early; `exact_count` is a lower bound.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitCount {
    pub h_plus: CertifiedReal,
    pub h_minus: CertifiedReal,
    pub orbit_height: f64,
    pub rows: Vec<OrbitCountRow>,
}

/// Heights `h(f^n x)` for `n = 0, 1, ...` until
/// `d^n (ĥ - r) - Σ c > max log T`, which bounds every later height from
/// below by `ĥ(f^n x) <= h(f^n x) + Σ_v c_{f,v}`.
struct HalfOrbit {
    heights: Vec<Interval>,
    d: f64,
    h_lower: f64,
    c_sum: f64,
    truncated: bool,
}

impl HalfOrbit {
    /// Every iterate from index `n` on has height above `t`.
    fn beyond(&self, n: usize, t: f64) -> bool {
        self.d.powi(n as i32) * self.h_lower - self.c_sum > t
    }

    fn count(&self, t: f64, skip: usize) -> usize {
        let below = |h: &&Interval| if h.hi <= t || h.lo > t { h.hi <= t } else { h.mid() <= t };
        self.heights.iter().skip(skip).filter(below).count()
    }

    fn truncated_at(&self, t: f64) -> bool {
        self.truncated && !self.beyond(self.heights.len(), t)
    }
}

fn orbit_heights(
    aut: &RegularAutomorphism,
    x: &[Rat],
    direction: Direction,
    h_lower: f64,
    c_sum: f64,
    t_max: f64,
    bit_budget: u64,
) -> Result<HalfOrbit> {
    let (map, d) = match direction {
        Direction::Forward => (aut.forward(), aut.d() as f64),
        Direction::Backward => (aut.inverse(), aut.d_minus() as f64),
    };
    let mut out = HalfOrbit {
        heights: Vec::new(),
        d,
        h_lower,
        c_sum,
        truncated: false,
    };
    let mut y = x.to_vec();
    loop {
        if out.beyond(out.heights.len(), t_max) {
            return Ok(out);
        }
        out.heights.push(weil_height_interval(&y));
        let next = map.eval(&y)?;
        if point_bits(&next) > bit_budget {
            out.truncated = true;
            return Ok(out);
        }
        y = next;
    }
}

/// `#{n ∈ Z : h(f^n x) <= T}` against `(1/log d + 1/log d-) log T - ĥ(O(x))`.
pub fn orbit_counting(
    aut: &RegularAutomorphism,
    cert: &Certificate,
    x: &[Rat],
    t_values: &[f64],
    bit_budget: u64,
    cfg: &HeightConfig,
) -> Result<OrbitCount> {
    if t_values.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Input("T values must be positive".into()));
    }
    let rec = detect_periodic(aut, cert, x, 64, cfg)?;
    if rec.is_periodic {
        return Err(Error::Input("orbit counting needs a non-periodic point".into()));
    }
    let r = canonical_heights(aut, cert, x, &cfg.clone().without_direct())?;
    let oh = orbit_height(aut, r.h_plus.value, r.h_minus.value)?;
    let mut places = vec![Place::Archimedean];
    places.extend(bad_place_set(aut, cert)?.places());
    let (mut cf, mut cg) = (0.0, 0.0);
    for place in places {
        let k = place_constants(aut, cert, place);
        cf += k.c_f.interval().hi;
        cg += k.c_finv.interval().hi;
    }
    let t_max = t_values.iter().copied().fold(0.0, f64::max);
    let fwd = orbit_heights(
        aut,
        x,
        Direction::Forward,
        r.h_plus.value - r.h_plus.radius,
        cf,
        t_max,
        bit_budget,
    )?;
    let bwd = orbit_heights(
        aut,
        x,
        Direction::Backward,
        r.h_minus.value - r.h_minus.radius,
        cg,
        t_max,
        bit_budget,
    )?;
    let slope = 1.0 / (aut.d() as f64).ln() + 1.0 / (aut.d_minus() as f64).ln();
    let rows = t_values
        .iter()
        .map(|&t| {
            // Index 0 appears in both directions.
            let count = fwd.count(t, 0) + bwd.count(t, 1);
            let predicted = slope * t.ln() - oh;
            OrbitCountRow {
                log_t: t.ln(),
                exact_count: count as u64,
                predicted,
                residual: count as f64 - predicted,
                truncated: fwd.truncated_at(t) || bwd.truncated_at(t),
            }
        })
        .collect();
    Ok(OrbitCount {
        h_plus: r.h_plus,
        h_minus: r.h_minus,
        orbit_height: oh,
        rows,
    })
}
