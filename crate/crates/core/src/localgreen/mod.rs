//! Local Green functions `G_{f,v}` with certified error, the filtration
//! sets `B`, `U±`, `N±`, `V±`, and escape classification.
//!
//! Evaluation keeps a bracket `[lo, hi]` for `G(x)`. The upper end comes
//! from `G(x) <= d^-n (log+ ||f^n x|| + c_f)`, valid for every polynomial
//! map. Once an iterate lies in `V+` the lower end
//! `G(x) >= d^-n (log+ ||f^n x|| + c+)` becomes available. Iterates are
//! exact rationals while small, then certified balls: outward-rounded
//! intervals at infinity, p-adic numbers with exact valuations at `p`.

mod ball;
mod padic;

use serde::{Deserialize, Serialize};

use crate::algebra::{point_bits, Rat};
use crate::automorphism::{PolyMap, RegularAutomorphism, DEFAULT_BIT_BUDGET};
use crate::certificate::{place_constants, upper_bound_constant, Certificate, PlaceConstants};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::places::{min_valuation, valuation, LogConst, Place};

use ball::{normalized_lift, sup_norm, IntervalMap};
use padic::{norm_info, Ctx, PAdic, PAdicMap};

#[derive(Clone, Debug, PartialEq)]
pub struct GreenConfig {
    pub tolerance: f64,
    pub max_iterations: u32,
    /// Bit size of an exact iterate above which evaluation switches to balls.
    pub exact_bits: u64,
    /// p-adic digits carried by ball iterates.
    pub padic_precision: u32,
}

impl Default for GreenConfig {
    fn default() -> Self {
        GreenConfig {
            tolerance: 1e-8,
            max_iterations: 64,
            exact_bits: 1 << 16,
            padic_precision: 48,
        }
    }
}

impl GreenConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        GreenConfig {
            tolerance,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// A certified value of a local Green function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenValue {
    pub place: Place,
    pub direction: Direction,
    pub value: f64,
    pub error_radius: f64,
    pub iterations_used: u32,
    /// A lower-bound regime was entered.
    pub certified: bool,
    pub lower: f64,
    pub upper: f64,
    /// Exact bracket in units of `log p` at finite places.
    pub log_p_bracket: Option<(Rat, Rat)>,
    /// Set when the orbit returned to its starting point.
    pub period: Option<u32>,
}

impl GreenValue {
    pub fn contains(&self, t: f64) -> bool {
        (t - self.value).abs() <= self.error_radius
    }
}

struct Lower {
    epsilon: Rat,
    delta: Rat,
    c: LogConst,
}

struct Regime<'a> {
    map: &'a PolyMap,
    place: Place,
    direction: Direction,
    d: u32,
    upper: LogConst,
    /// Lower-bound regimes, strongest constant first.
    lower: Vec<Lower>,
}

/// `x` lies outside `N = {ε||x|| > 1, max(||f x||, 1) < δ max(||x||, 1)^d}`.
fn outside_n(place: Place, x: &[Rat], fx: &[Rat], epsilon: &Rat, delta: &Rat, d: u32) -> bool {
    let nx = place.norm(x);
    if (epsilon * &nx) <= Rat::one() {
        return true;
    }
    place.norm_plus(fx) >= delta * &Rat::max(nx, Rat::one()).pow(d as u64)
}

struct Tracker {
    place: Place,
    direction: Direction,
    d: u32,
    lo: f64,
    hi: f64,
    qlo: Rat,
    qhi: Option<Rat>,
    certified: bool,
    iterations: u32,
}

impl Tracker {
    fn new(place: Place, direction: Direction, d: u32) -> Self {
        Tracker {
            place,
            direction,
            d,
            lo: 0.0,
            hi: f64::INFINITY,
            qlo: Rat::zero(),
            qhi: None,
            certified: false,
            iterations: 0,
        }
    }

    fn scale(&self, n: u32) -> Rat {
        Rat::from_u64(self.d as u64).powi(-(n as i64))
    }

    fn update_arch(&mut self, n: u32, log_norm: Interval, upper: Interval, lower: Option<Interval>) {
        let s = Interval::from_rat(&self.scale(n));
        let hi = ((log_norm + upper) * s).hi;
        if hi < self.hi {
            self.hi = hi;
        }
        if let Some(c) = lower {
            self.certified = true;
            let lo = ((log_norm + c) * s).lo;
            if lo > self.lo {
                self.lo = lo;
            }
        }
        self.iterations = n;
    }

    fn update_finite(&mut self, n: u32, log_norm: i64, upper: &Rat, lower: Option<&Rat>) {
        let s = self.scale(n);
        let l = Rat::from_i64(log_norm);
        let hi = (&l + upper) * &s;
        if self.qhi.as_ref().is_none_or(|q| hi < *q) {
            self.qhi = Some(hi);
        }
        if let Some(c) = lower {
            self.certified = true;
            let lo = (&l + c) * &s;
            if lo > self.qlo {
                self.qlo = lo;
            }
        }
        self.iterations = n;
    }

    fn value(&self) -> GreenValue {
        let mut out = GreenValue {
            place: self.place,
            direction: self.direction,
            value: 0.0,
            error_radius: f64::INFINITY,
            iterations_used: self.iterations,
            certified: self.certified,
            lower: 0.0,
            upper: f64::INFINITY,
            log_p_bracket: None,
            period: None,
        };
        match self.place {
            Place::Archimedean => {
                let (lo, hi) = (self.lo, self.hi.max(self.lo));
                out.lower = lo;
                out.upper = hi;
                if hi.is_finite() {
                    out.value = 0.5 * lo + 0.5 * hi;
                    out.error_radius = if lo == hi {
                        0.0
                    } else {
                        (hi - out.value).next_up().max((out.value - lo).next_up())
                    };
                }
            }
            Place::Finite(p) => {
                let Some(qhi) = &self.qhi else { return out };
                let qhi = Rat::max(qhi.clone(), self.qlo.clone());
                let lnp = Interval::ln_rat(&Rat::from_u64(p));
                let mid = (&self.qlo + &qhi) / Rat::from_i64(2);
                let half = (&qhi - &self.qlo) / Rat::from_i64(2);
                out.lower = (Interval::from_rat(&self.qlo) * lnp).lo.max(0.0);
                out.upper = (Interval::from_rat(&qhi) * lnp).hi;
                if mid.is_zero() {
                    out.value = 0.0;
                    out.error_radius = 0.0;
                    out.upper = 0.0;
                } else {
                    let v = Interval::from_rat(&mid) * lnp;
                    out.value = v.mid();
                    out.error_radius = if half.is_zero() {
                        0.0
                    } else {
                        (Interval::from_rat(&half) * lnp).hi
                    } + v.width();
                }
                out.log_p_bracket = Some((self.qlo.clone(), qhi));
            }
        }
        out
    }
}

fn log_norm_plus_p(y: &[Rat], p: u64) -> i64 {
    min_valuation(y, p).map_or(0, |v| (-v).max(0))
}

impl Regime<'_> {
    fn member(&self, y: &[Rat], fy: &[Rat]) -> Option<&Lower> {
        self.lower
            .iter()
            .find(|l| outside_n(self.place, y, fy, &l.epsilon, &l.delta, self.d))
    }

    fn run(&self, x: &[Rat], cfg: &GreenConfig) -> Result<GreenValue> {
        if x.len() != self.map.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.map.dim(),
                found: x.len(),
            });
        }
        if !(cfg.tolerance > 0.0) {
            return Err(Error::Input("tolerance must be positive".into()));
        }
        let mut t = Tracker::new(self.place, self.direction, self.d);
        let upper_i = self.upper.interval();
        let mut y = x.to_vec();
        for n in 0..=cfg.max_iterations {
            if n > 0 && y == x {
                let mut v = t.value();
                v.value = 0.0;
                v.error_radius = 0.0;
                v.lower = 0.0;
                v.upper = 0.0;
                v.certified = true;
                v.iterations_used = n;
                v.period = Some(n);
                if v.log_p_bracket.is_some() {
                    v.log_p_bracket = Some((Rat::zero(), Rat::zero()));
                }
                return Ok(v);
            }
            let next = self.map.eval(&y)?;
            let member = self.member(&y, &next);
            match self.place {
                Place::Archimedean => t.update_arch(
                    n,
                    Interval::ln_rat(&self.place.norm_plus(&y)),
                    upper_i,
                    member.map(|l| l.c.interval()),
                ),
                Place::Finite(p) => {
                    let c = member.map(|l| l.c.log_p_coef(p));
                    t.update_finite(n, log_norm_plus_p(&y, p), &self.upper.log_p_coef(p), c.as_ref())
                }
            }
            let v = t.value();
            if v.error_radius <= cfg.tolerance {
                return Ok(v);
            }
            if n == cfg.max_iterations {
                break;
            }
            if point_bits(&next) > cfg.exact_bits {
                return match self.place {
                    Place::Archimedean => self.ball_archimedean(next, n + 1, t, cfg),
                    Place::Finite(p) => self.ball_padic(p, next, n + 1, t, cfg),
                };
            }
            y = next;
        }
        Err(Error::GreenBudget {
            partial: Box::new(t.value()),
        })
    }

    fn ball_archimedean(
        &self,
        y: Vec<Rat>,
        n0: u32,
        mut t: Tracker,
        cfg: &GreenConfig,
    ) -> Result<GreenValue> {
        let lift = IntervalMap::new(&self.map.projective_components());
        let upper_i = self.upper.interval();
        let lower: Vec<(Interval, Interval, Interval)> = self
            .lower
            .iter()
            .map(|l| {
                (
                    Interval::ln_rat(&l.epsilon.recip()),
                    Interval::ln_rat(&l.delta),
                    l.c.interval(),
                )
            })
            .collect();
        let d = Interval::point(self.d as f64);
        let (mut v, mut lam) = normalized_lift(&y);
        for n in n0..=cfg.max_iterations {
            let Some(nv) = sup_norm(&v).ln() else { break };
            if !nv.is_finite() || nv.width() > 1.0 {
                break;
            }
            let log_norm = lam + nv;
            let u = lift.eval(&v);
            let su = sup_norm(&u);
            let lu = su.ln();
            let member = lower.iter().find(|(inv_eps, ln_delta, _)| {
                log_norm.hi <= inv_eps.lo || lu.is_some_and(|lu| (lu - nv * d).lo >= ln_delta.hi)
            });
            t.update_arch(n, log_norm, upper_i, member.map(|l| l.2));
            let gv = t.value();
            if gv.error_radius <= cfg.tolerance {
                return Ok(gv);
            }
            let s = su.mag();
            if lu.is_none() || !(s > 0.0 && s.is_finite()) {
                break;
            }
            let sp = Interval::point(s);
            v = u.iter().map(|c| c.div(&sp)).collect();
            lam = lam * d + sp.ln().expect("positive");
        }
        Err(Error::GreenBudget {
            partial: Box::new(t.value()),
        })
    }

    fn ball_padic(
        &self,
        p: u64,
        y: Vec<Rat>,
        n0: u32,
        mut t: Tracker,
        cfg: &GreenConfig,
    ) -> Result<GreenValue> {
        let ctx = Ctx::new(p, cfg.padic_precision.max(1));
        let map = PAdicMap::new(&ctx, self.map.components());
        let upper = self.upper.log_p_coef(p);
        let lower: Vec<(i64, i64, Rat)> = self
            .lower
            .iter()
            .map(|l| {
                (
                    -valuation(&l.epsilon, p).expect("nonzero"),
                    valuation(&l.delta, p).expect("nonzero"),
                    l.c.log_p_coef(p),
                )
            })
            .collect();
        let d = self.d as i128;
        let mut yv: Vec<PAdic> = y.iter().map(|c| ctx.from_rat(c)).collect();
        for n in n0..=cfg.max_iterations {
            let info = norm_info(&yv);
            let Some(l) = info.log_plus else { break };
            let next = map.eval(&ctx, &yv);
            let lnext = next.as_ref().and_then(|nx| norm_info(nx).log_plus);
            let member = lower.iter().find(|(inv_eps, ln_delta, _)| {
                info.log_upper.is_none_or(|u| u <= *inv_eps)
                    || lnext.is_some_and(|ln| ln as i128 >= *ln_delta as i128 + d * l as i128)
            });
            t.update_finite(n, l, &upper, member.map(|m| &m.2));
            let gv = t.value();
            if gv.error_radius <= cfg.tolerance {
                return Ok(gv);
            }
            let Some(nx) = next else { break };
            yv = nx;
        }
        Err(Error::GreenBudget {
            partial: Box::new(t.value()),
        })
    }
}

/// Membership in `B`, `U+` and `U-` for one set of parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationClass {
    #[serde(rename = "in_B")]
    pub in_b: bool,
    #[serde(rename = "in_Uplus")]
    pub in_uplus: bool,
    #[serde(rename = "in_Uminus")]
    pub in_uminus: bool,
}

/// The filtration sets for a choice of `(ε, δ)` at one place.
#[derive(Clone, Debug)]
pub struct Filtration<'a> {
    aut: &'a RegularAutomorphism,
    place: Place,
    epsilon: Rat,
    delta: Rat,
}

impl<'a> Filtration<'a> {
    pub fn new(aut: &'a RegularAutomorphism, place: Place, epsilon: Rat, delta: Rat) -> Self {
        Filtration {
            aut,
            place,
            epsilon,
            delta,
        }
    }

    pub fn canonical(aut: &'a RegularAutomorphism, k: &PlaceConstants) -> Self {
        Self::new(aut, k.place, k.epsilon.clone(), k.delta.clone())
    }

    /// Parameters used for escape classification.
    pub fn strict(aut: &'a RegularAutomorphism, k: &PlaceConstants) -> Self {
        Self::new(aut, k.place, k.epsilon_strict.clone(), k.delta.clone())
    }

    pub fn epsilon(&self) -> &Rat {
        &self.epsilon
    }

    pub fn delta(&self) -> &Rat {
        &self.delta
    }

    pub fn classify(&self, x: &[Rat]) -> Result<FiltrationClass> {
        let fx = self.aut.forward().eval(x)?;
        let nx = self.place.norm(x);
        let in_b = nx <= self.epsilon.recip();
        let grows = self.place.norm(&fx) >= &self.delta * &nx.pow(self.aut.d() as u64);
        Ok(FiltrationClass {
            in_b,
            in_uplus: !in_b && grows,
            in_uminus: !in_b && !grows,
        })
    }

    pub fn in_n_plus(&self, x: &[Rat]) -> Result<bool> {
        let fx = self.aut.forward().eval(x)?;
        Ok(!outside_n(self.place, x, &fx, &self.epsilon, &self.delta, self.aut.d()))
    }

    pub fn in_n_minus(&self, x: &[Rat]) -> Result<bool> {
        let gx = self.aut.inverse().eval(x)?;
        Ok(!outside_n(self.place, x, &gx, &self.epsilon, &self.delta, self.aut.d_minus()))
    }

    pub fn in_v_plus(&self, x: &[Rat]) -> Result<bool> {
        self.in_n_plus(x).map(|b| !b)
    }

    pub fn in_v_minus(&self, x: &[Rat]) -> Result<bool> {
        self.in_n_minus(x).map(|b| !b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForwardEscape {
    Wplus,
    Kplus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BackwardEscape {
    Wminus,
    Kminus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeClass {
    pub forward: ForwardEscape,
    pub backward: BackwardEscape,
    pub decided_at_iteration: u32,
    pub forward_iteration: u32,
    pub backward_iteration: u32,
}

/// An automorphism with its constants at one place.
#[derive(Clone, Debug)]
pub struct LocalDynamics<'a> {
    aut: &'a RegularAutomorphism,
    constants: PlaceConstants,
}

impl<'a> LocalDynamics<'a> {
    pub fn new(aut: &'a RegularAutomorphism, cert: &Certificate, place: Place) -> Self {
        LocalDynamics {
            aut,
            constants: place_constants(aut, cert, place),
        }
    }

    pub fn from_constants(aut: &'a RegularAutomorphism, constants: PlaceConstants) -> Self {
        LocalDynamics { aut, constants }
    }

    pub fn place(&self) -> Place {
        self.constants.place
    }

    pub fn constants(&self) -> &PlaceConstants {
        &self.constants
    }

    pub fn filtration(&self) -> Filtration<'a> {
        Filtration::canonical(self.aut, &self.constants)
    }

    pub fn strict_filtration(&self) -> Filtration<'a> {
        Filtration::strict(self.aut, &self.constants)
    }

    fn regime(&self, direction: Direction) -> Regime<'_> {
        let k = &self.constants;
        let (map, d, upper, c, c_loose) = match direction {
            Direction::Forward => (self.aut.forward(), self.aut.d(), &k.c_f, &k.c_plus, &k.c_plus_loose),
            Direction::Backward => (
                self.aut.inverse(),
                self.aut.d_minus(),
                &k.c_finv,
                &k.c_minus,
                &k.c_minus_loose,
            ),
        };
        Regime {
            map,
            place: k.place,
            direction,
            d,
            upper: upper.clone(),
            lower: vec![
                Lower {
                    epsilon: k.epsilon.clone(),
                    delta: k.delta.clone(),
                    c: c.clone(),
                },
                Lower {
                    epsilon: k.epsilon_loose.clone(),
                    delta: k.delta.clone(),
                    c: c_loose.clone(),
                },
            ],
        }
    }

    pub fn green(&self, x: &[Rat], direction: Direction, cfg: &GreenConfig) -> Result<GreenValue> {
        self.regime(direction).run(x, cfg)
    }

    /// Decide `W+`/`K+` and `W-`/`K-` within `budget` iterations each.
    ///
    /// Escape is detected by an iterate in the strict `U+` (resp. `U-`).
    /// Boundedness is only reported when it is proven: the orbit returns to
    /// `x`, or at a finite place the map is `p`-integral and an iterate has
    /// norm at most 1.
    pub fn classify_escape(&self, x: &[Rat], budget: u32) -> Result<EscapeClass> {
        let (fe, fi) = self.escape(x, Direction::Forward, budget)?;
        let (be, bi) = self.escape(x, Direction::Backward, budget)?;
        Ok(EscapeClass {
            forward: if fe { ForwardEscape::Wplus } else { ForwardEscape::Kplus },
            backward: if be {
                BackwardEscape::Wminus
            } else {
                BackwardEscape::Kminus
            },
            decided_at_iteration: fi.max(bi),
            forward_iteration: fi,
            backward_iteration: bi,
        })
    }

    fn escape(&self, x: &[Rat], direction: Direction, budget: u32) -> Result<(bool, u32)> {
        let fil = self.strict_filtration();
        let map = match direction {
            Direction::Forward => self.aut.forward(),
            Direction::Backward => self.aut.inverse(),
        };
        let place = self.place();
        let integral = place
            .prime()
            .is_some_and(|p| map.coefficients().all(|c| valuation(c, p).is_none_or(|v| v >= 0)));
        let mut y = x.to_vec();
        for n in 0..=budget {
            if n > 0 && y == x {
                return Ok((false, n));
            }
            if integral && place.norm(&y) <= Rat::one() {
                return Ok((false, n));
            }
            let class = fil.classify(&y)?;
            let escaping = match direction {
                Direction::Forward => class.in_uplus,
                Direction::Backward => class.in_uminus,
            };
            if escaping {
                return Ok((true, n));
            }
            if n == budget {
                break;
            }
            y = map.eval(&y)?;
            if point_bits(&y) > DEFAULT_BIT_BUDGET {
                return Err(Error::Undecided(format!(
                    "{direction:?} orbit exceeded the bit budget at iterate {} without a decision",
                    n + 1
                )));
            }
        }
        Err(Error::Undecided(format!(
            "{direction:?} orbit undecided after {budget} iterations"
        )))
    }
}

pub fn green(
    aut: &RegularAutomorphism,
    cert: &Certificate,
    place: Place,
    x: &[Rat],
    cfg: &GreenConfig,
) -> Result<GreenValue> {
    LocalDynamics::new(aut, cert, place).green(x, Direction::Forward, cfg)
}

pub fn green_inverse(
    aut: &RegularAutomorphism,
    cert: &Certificate,
    place: Place,
    x: &[Rat],
    cfg: &GreenConfig,
) -> Result<GreenValue> {
    LocalDynamics::new(aut, cert, place).green(x, Direction::Backward, cfg)
}

/// Green function of a plain polynomial map of degree at least 2, with
/// upper-bound certification only.
pub fn green_polymap(f: &PolyMap, place: Place, x: &[Rat], cfg: &GreenConfig) -> Result<GreenValue> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::Input(format!("map degree {d} is below 2")));
    }
    Regime {
        map: f,
        place,
        direction: Direction::Forward,
        d,
        upper: upper_bound_constant(f, place),
        lower: Vec::new(),
    }
    .run(x, cfg)
}

/// Membership with the strict parameters.
pub fn classify_filtration(
    aut: &RegularAutomorphism,
    cert: &Certificate,
    place: Place,
    x: &[Rat],
) -> Result<FiltrationClass> {
    let k = place_constants(aut, cert, place);
    Filtration::strict(aut, &k).classify(x)
}

pub fn classify_escape(
    aut: &RegularAutomorphism,
    cert: &Certificate,
    place: Place,
    x: &[Rat],
    budget: u32,
) -> Result<EscapeClass> {
    LocalDynamics::new(aut, cert, place).classify_escape(x, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_point;
    use crate::certificate::build_certificate_n2;

    const XY: [&str; 2] = ["x", "y"];

    fn henon() -> (RegularAutomorphism, Certificate) {
        let a = RegularAutomorphism::new(
            PolyMap::parse(&["y", "y^2 - x"], &XY).unwrap(),
            PolyMap::parse(&["x^2 - y", "x"], &XY).unwrap(),
        )
        .unwrap();
        let c = build_certificate_n2(&a).unwrap();
        (a, c)
    }

    fn pt(s: &str) -> Vec<Rat> {
        parse_point(s).unwrap()
    }

    #[test]
    fn good_prime_integral_point_is_exactly_zero() {
        let (a, c) = henon();
        let g = green(&a, &c, Place::Finite(5), &pt("3,-7"), &GreenConfig::default()).unwrap();
        assert_eq!(g.value, 0.0);
        assert_eq!(g.error_radius, 0.0);
        assert_eq!(g.iterations_used, 0);
        assert!(g.certified);
    }

    #[test]
    fn two_adic_value_at_half_zero() {
        let (a, c) = henon();
        let g = green(&a, &c, Place::Finite(2), &pt("1/2,0"), &GreenConfig::default()).unwrap();
        assert_eq!(g.log_p_bracket, Some((Rat::new(1, 2), Rat::new(1, 2))));
        assert!((g.value - 0.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn archimedean_value_is_bracketed() {
        let (a, c) = henon();
        let g = green(&a, &c, Place::Archimedean, &pt("0,2"), &GreenConfig::default()).unwrap();
        assert!(g.certified);
        assert!(g.error_radius <= 1e-8);
        assert!(g.lower <= g.value && g.value <= g.upper);
        assert!(g.value > 0.3 && g.value < 2f64.ln() + 3f64.ln());
    }

    #[test]
    fn fixed_point_is_periodic() {
        let (a, c) = henon();
        let g = green_inverse(&a, &c, Place::Archimedean, &pt("2,2"), &GreenConfig::default()).unwrap();
        assert_eq!(g.period, Some(1));
        assert_eq!((g.value, g.error_radius), (0.0, 0.0));
        let g = green(&a, &c, Place::Finite(3), &pt("1/3,1/3"), &GreenConfig::default()).unwrap();
        assert!(g.period.is_none() && g.value > 0.0);
    }

    #[test]
    fn padic_ball_phase_is_used() {
        let (a, c) = henon();
        let cfg = GreenConfig {
            exact_bits: 64,
            tolerance: 1e-12,
            ..GreenConfig::default()
        };
        let g = green(&a, &c, Place::Finite(3), &pt("1/3,1/9"), &cfg).unwrap();
        let exact = green(&a, &c, Place::Finite(3), &pt("1/3,1/9"), &GreenConfig::default()).unwrap();
        assert_eq!(g.log_p_bracket, exact.log_p_bracket);
    }

    #[test]
    fn archimedean_ball_phase_agrees_with_exact() {
        let (a, c) = henon();
        let small = GreenConfig {
            exact_bits: 64,
            ..GreenConfig::default()
        };
        let g1 = green(&a, &c, Place::Archimedean, &pt("0,2"), &small).unwrap();
        let g2 = green(&a, &c, Place::Archimedean, &pt("0,2"), &GreenConfig::default()).unwrap();
        assert!((g1.value - g2.value).abs() <= g1.error_radius + g2.error_radius);
    }

    #[test]
    fn filtration_examples_at_two() {
        let (a, c) = henon();
        let p = Place::Finite(2);
        let k = classify_filtration(&a, &c, p, &[Rat::new(1, 1024), Rat::zero()]).unwrap();
        assert!(k.in_uminus && !k.in_b && !k.in_uplus);
        let k = classify_filtration(&a, &c, p, &[Rat::zero(), Rat::new(1, 1024)]).unwrap();
        assert!(k.in_uplus);
        let k = classify_filtration(&a, &c, p, &pt("3,5")).unwrap();
        assert!(k.in_b);
    }

    #[test]
    fn escape_examples() {
        let (a, c) = henon();
        let e = classify_escape(&a, &c, Place::Archimedean, &pt("2,2"), 64).unwrap();
        assert_eq!((e.forward, e.backward), (ForwardEscape::Kplus, BackwardEscape::Kminus));
        let e = classify_escape(&a, &c, Place::Archimedean, &pt("0,2"), 64).unwrap();
        assert_eq!((e.forward, e.backward), (ForwardEscape::Wplus, BackwardEscape::Wminus));
        let e = classify_escape(&a, &c, Place::Finite(7), &pt("3,4"), 64).unwrap();
        assert_eq!(e.decided_at_iteration, 0);
        assert_eq!(e.forward, ForwardEscape::Kplus);
    }

    #[test]
    fn elementary_map_green_vanishes() {
        let e = PolyMap::parse(&["x", "y + x^2"], &XY).unwrap();
        let cfg = GreenConfig::with_tolerance(1e-9);
        for place in [Place::Archimedean, Place::Finite(2)] {
            let g = green_polymap(&e, place, &pt("3/2,-5"), &cfg).unwrap();
            assert!(g.value.abs() <= 1e-9 && !g.certified, "{g:?}");
        }
    }
}
