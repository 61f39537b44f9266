//! Polynomial maps of affine space and regular automorphisms.

use serde::{Deserialize, Serialize};

use crate::algebra::forms::{binary_form_gcd, BinaryForm, FormGcd};
use crate::algebra::poly::{max_exps, PowerTable};
use crate::algebra::{point_bits, MultiPoly, Rat};
use crate::certificate::{verify_certificate, Certificate};
use crate::error::{Error, Result};

/// Default cap on terms in symbolic compositions.
pub const DEFAULT_TERM_BUDGET: usize = 200_000;

/// Default cap on the total bit size of an iterate.
pub const DEFAULT_BIT_BUDGET: u64 = 4_000_000;

/// A polynomial self-map of affine `N`-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    comps: Vec<MultiPoly>,
}

impl PolyMap {
    pub fn new(comps: Vec<MultiPoly>) -> Result<Self> {
        let n = comps.len();
        if n == 0 {
            return Err(Error::Input("map has no components".into()));
        }
        if let Some(c) = comps.iter().find(|c| c.nvars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.nvars(),
            });
        }
        let map = PolyMap { comps };
        if map.degree() == 0 {
            return Err(Error::Input("constant map".into()));
        }
        Ok(map)
    }

    /// Parse components written in the given variable names.
    pub fn parse(comps: &[&str], names: &[&str]) -> Result<Self> {
        if comps.len() != names.len() {
            return Err(Error::DimensionMismatch {
                expected: names.len(),
                found: comps.len(),
            });
        }
        let polys = comps
            .iter()
            .map(|s| MultiPoly::parse(s, names))
            .collect::<Result<Vec<_>>>()?;
        PolyMap::new(polys)
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.comps
    }

    /// `max_i deg f_i`.
    pub fn degree(&self) -> u32 {
        self.comps.iter().map(MultiPoly::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let pw = PowerTable::new(self.dim(), max_exps(self.comps.iter()), |i| x[i].clone());
        Ok(self
            .comps
            .iter()
            .map(|p| {
                let mut acc = Rat::zero();
                for (m, c) in p.terms() {
                    let mut t = c.clone();
                    for (i, &e) in m.exps().iter().enumerate() {
                        if e > 0 {
                            t *= pw.get(i, e);
                        }
                    }
                    acc += t;
                }
                acc
            })
            .collect())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PolyMap, term_budget: usize) -> Result<PolyMap> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let comps = self
            .comps
            .iter()
            .map(|c| c.compose(&other.comps, term_budget))
            .collect::<Result<Vec<_>>>()?;
        PolyMap::new(comps)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim();
        self.comps
            .iter()
            .enumerate()
            .all(|(i, c)| *c == MultiPoly::var(n, i))
    }

    /// `F_i(X, T) = T^d f_i(X/T)` with the common degree `d`.
    pub fn homogenization(&self) -> Vec<MultiPoly> {
        let d = self.degree();
        self.comps
            .iter()
            .map(|c| c.homogenize(d).expect("degree bounded by map degree"))
            .collect()
    }

    /// The homogenisation followed by `T^d`: the projective extension.
    pub fn projective_components(&self) -> Vec<MultiPoly> {
        let n = self.dim();
        let d = self.degree();
        let mut out = self.homogenization();
        let mut e = vec![0; n + 1];
        e[n] = d;
        out.push(MultiPoly::monomial(n + 1, e, Rat::one()));
        out
    }

    /// Degree-`d` parts `F_i(X, 0)`; zero for components of lower degree.
    pub fn top_forms(&self) -> Vec<MultiPoly> {
        let d = self.degree();
        self.comps.iter().map(|c| c.homogeneous_part(d)).collect()
    }

    pub fn render(&self, names: &[&str]) -> Vec<String> {
        self.comps.iter().map(|c| c.render(names)).collect()
    }

    /// Every coefficient of every component.
    pub fn coefficients(&self) -> impl Iterator<Item = &Rat> {
        self.comps.iter().flat_map(MultiPoly::coefficients)
    }
}

/// `f ∘ g = id` and `g ∘ f = id` as exact polynomial identities.
pub fn verify_inverse(f: &PolyMap, g: &PolyMap, term_budget: usize) -> Result<bool> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: g.dim(),
        });
    }
    Ok(f.compose(g, term_budget)?.is_identity() && g.compose(f, term_budget)?.is_identity())
}

/// Outcome of the regularity test `I+ ∩ I- = ∅`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Regularity {
    Regular { i_plus: String, i_minus: String },
    NotRegular { witness: String },
    Undecided { reason: String },
}

fn binary_forms(top: &[MultiPoly], d: u32) -> Vec<BinaryForm<Rat>> {
    top.iter()
        .map(|t| BinaryForm {
            coeffs: (0..=d).map(|i| t.coeff(&[d - i, i])).collect(),
        })
        .collect()
}

fn render_form(g: &FormGcd<Rat>) -> String {
    let coeffs = g.form();
    let k = g.degree() as u32;
    let poly = MultiPoly::from_terms(
        2,
        coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| (vec![k - i as u32, i as u32], c)),
    );
    poly.render(&["X", "Y"])
}

/// Points of `V(g)` on the line at infinity, as far as they are rational
/// and linear; anything else is described by its defining form.
fn describe_zeros(g: &FormGcd<Rat>) -> String {
    let rad = g.radical();
    let mut parts = Vec::new();
    if rad.y_mult > 0 {
        parts.push("(1:0:0)".to_string());
    }
    match rad.h.len() {
        0 | 1 => {}
        2 => parts.push(format!("({}:1:0)", -&rad.h[0])),
        _ => {
            let only_h = FormGcd {
                y_mult: 0,
                h: rad.h.clone(),
            };
            parts.push(format!("zeros of {} on T=0", render_form(&only_h)));
        }
    }
    if parts.is_empty() {
        "empty".to_string()
    } else {
        format!("{{{}}}", parts.join(", "))
    }
}

/// Decide regularity from top forms; conclusive only in dimension 2.
pub fn regularity_check(f: &PolyMap, g: &PolyMap) -> Regularity {
    if f.dim() != 2 {
        return Regularity::Undecided {
            reason: format!("no top-form test in dimension {}; supply a certificate", f.dim()),
        };
    }
    let ff = binary_forms(&f.top_forms(), f.degree());
    let gg = binary_forms(&g.top_forms(), g.degree());
    let gp = binary_form_gcd(&ff).expect("top forms not all zero");
    let gm = binary_form_gcd(&gg).expect("top forms not all zero");
    let all: Vec<_> = ff.iter().chain(gg.iter()).cloned().collect();
    let common = binary_form_gcd(&all).expect("top forms not all zero");
    if common.is_constant() {
        Regularity::Regular {
            i_plus: describe_zeros(&gp),
            i_minus: describe_zeros(&gm),
        }
    } else {
        Regularity::NotRegular {
            witness: render_form(&common.radical()),
        }
    }
}

/// A validated regular polynomial automorphism with both degrees at least 2.
#[derive(Clone, Debug)]
pub struct RegularAutomorphism {
    forward: PolyMap,
    inverse: PolyMap,
    regularity: Regularity,
}

impl RegularAutomorphism {
    /// Validate a dimension-2 automorphism from its top forms.
    pub fn new(forward: PolyMap, inverse: PolyMap) -> Result<Self> {
        Self::build(forward, inverse, None)
    }

    /// Validate using a supplied certificate, which proves regularity in any
    /// dimension.
    pub fn with_certificate(forward: PolyMap, inverse: PolyMap, cert: &Certificate) -> Result<Self> {
        Self::build(forward, inverse, Some(cert))
    }

    fn build(forward: PolyMap, inverse: PolyMap, cert: Option<&Certificate>) -> Result<Self> {
        if forward.dim() != inverse.dim() {
            return Err(Error::DimensionMismatch {
                expected: forward.dim(),
                found: inverse.dim(),
            });
        }
        let (d, dm) = (forward.degree(), inverse.degree());
        if d < 2 || dm < 2 {
            return Err(Error::Validation(format!(
                "degrees must be at least 2 (d={d}, d-={dm})"
            )));
        }
        if !verify_inverse(&forward, &inverse, DEFAULT_TERM_BUDGET)? {
            return Err(Error::Validation("inverse does not invert the map".into()));
        }
        let mut regularity = regularity_check(&forward, &inverse);
        if let Regularity::NotRegular { witness } = &regularity {
            return Err(Error::Validation(format!(
                "not regular: common top-form factor {witness}"
            )));
        }
        let aut = RegularAutomorphism {
            forward,
            inverse,
            regularity: regularity.clone(),
        };
        if let Some(c) = cert {
            if !verify_certificate(&aut, c)? {
                return Err(Error::Validation("certificate identity fails".into()));
            }
            if let Regularity::Undecided { .. } = regularity {
                regularity = Regularity::Regular {
                    i_plus: "disjoint from I- (certificate)".into(),
                    i_minus: "disjoint from I+ (certificate)".into(),
                };
            }
        } else if let Regularity::Undecided { reason } = &regularity {
            return Err(Error::Undecided(reason.clone()));
        }
        Ok(RegularAutomorphism { regularity, ..aut })
    }

    pub fn forward(&self) -> &PolyMap {
        &self.forward
    }

    pub fn inverse(&self) -> &PolyMap {
        &self.inverse
    }

    pub fn dim(&self) -> usize {
        self.forward.dim()
    }

    pub fn d(&self) -> u32 {
        self.forward.degree()
    }

    pub fn d_minus(&self) -> u32 {
        self.inverse.degree()
    }

    pub fn regularity(&self) -> &Regularity {
        &self.regularity
    }

    /// `f^n(x)`; negative `n` iterates the inverse.
    pub fn iterate(&self, x: &[Rat], n: i64, bit_budget: u64) -> Result<Vec<Rat>> {
        let map = if n >= 0 { &self.forward } else { &self.inverse };
        iterate_map(map, x, n.unsigned_abs(), bit_budget).map_err(|e| match e {
            Error::BitBudget { last_index } if n < 0 => Error::BitBudget {
                last_index: -last_index,
            },
            other => other,
        })
    }
}

/// `f^n(x)` for a plain map, failing when an iterate exceeds `bit_budget`.
pub fn iterate_map(map: &PolyMap, x: &[Rat], n: u64, bit_budget: u64) -> Result<Vec<Rat>> {
    let mut y = x.to_vec();
    if y.len() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            found: y.len(),
        });
    }
    for k in 0..n {
        let next = map.eval(&y)?;
        if point_bits(&next) > bit_budget {
            return Err(Error::BitBudget {
                last_index: k as i64,
            });
        }
        y = next;
    }
    Ok(y)
}

/// Degrees of `f, f^2, ..., f^k`.
pub fn algebraic_stability_degrees(f: &PolyMap, k: u32, term_budget: usize) -> Result<Vec<u32>> {
    if f.degree() < 2 {
        return Err(Error::Input("degree sequence needs d >= 2".into()));
    }
    let mut out = Vec::with_capacity(k as usize);
    let mut cur = f.clone();
    for i in 0..k {
        if i > 0 {
            cur = f.compose(&cur, term_budget)?;
        }
        out.push(cur.degree());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const XY: [&str; 2] = ["x", "y"];

    fn henon() -> (PolyMap, PolyMap) {
        (
            PolyMap::parse(&["y", "y^2 - x"], &XY).unwrap(),
            PolyMap::parse(&["x^2 - y", "x"], &XY).unwrap(),
        )
    }

    fn pt(s: &str) -> Vec<Rat> {
        crate::algebra::parse_point(s).unwrap()
    }

    #[test]
    fn henon_iterates() {
        let (f, g) = henon();
        let aut = RegularAutomorphism::new(f, g).unwrap();
        assert_eq!(aut.iterate(&pt("0,2"), 3, DEFAULT_BIT_BUDGET).unwrap(), pt("14,192"));
        assert_eq!(aut.iterate(&pt("0,2"), -3, DEFAULT_BIT_BUDGET).unwrap(), pt("18,4"));
        assert_eq!(aut.iterate(&pt("2,2"), 5, DEFAULT_BIT_BUDGET).unwrap(), pt("2,2"));
    }

    #[test]
    fn henon_is_regular() {
        let (f, g) = henon();
        match regularity_check(&f, &g) {
            Regularity::Regular { i_plus, i_minus } => {
                assert_eq!(i_plus, "{(1:0:0)}");
                assert_eq!(i_minus, "{(0:1:0)}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn elementary_is_not_regular() {
        let e = PolyMap::parse(&["x", "y + x^2"], &XY).unwrap();
        let ei = PolyMap::parse(&["x", "y - x^2"], &XY).unwrap();
        assert!(verify_inverse(&e, &ei, 1000).unwrap());
        match regularity_check(&e, &ei) {
            Regularity::NotRegular { witness } => assert_eq!(witness, "X"),
            other => panic!("{other:?}"),
        }
        let err = RegularAutomorphism::new(e.clone(), ei).unwrap_err();
        assert!(err.to_string().contains("common top-form factor X"));
        assert_eq!(algebraic_stability_degrees(&e, 3, 1000).unwrap(), vec![2, 2, 2]);
    }

    #[test]
    fn degree_sequences() {
        let (f, _) = henon();
        assert_eq!(algebraic_stability_degrees(&f, 3, 1000).unwrap(), vec![2, 4, 8]);
        let lin = PolyMap::parse(&["y", "x"], &XY).unwrap();
        assert!(algebraic_stability_degrees(&lin, 3, 1000).is_err());
    }

    #[test]
    fn rejects_wrong_inverse_and_linear_inverse() {
        let (f, _) = henon();
        let bad = PolyMap::parse(&["x^2 + y", "x"], &XY).unwrap();
        assert!(!verify_inverse(&f, &bad, 1000).unwrap());
        assert!(matches!(
            RegularAutomorphism::new(f, bad),
            Err(Error::Validation(_))
        ));
        let a = PolyMap::parse(&["y", "x + y^2"], &XY).unwrap();
        let lin = PolyMap::parse(&["y - x^2", "x"], &XY).unwrap();
        assert!(verify_inverse(&a, &lin, 1000).unwrap());
        let shear = PolyMap::parse(&["x + y", "y"], &XY).unwrap();
        let shear_inv = PolyMap::parse(&["x - y", "y"], &XY).unwrap();
        assert!(matches!(
            RegularAutomorphism::new(shear, shear_inv),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn homogenization_of_henon() {
        let (f, g) = henon();
        let names = ["X", "Y", "T"];
        let hf: Vec<String> = f.homogenization().iter().map(|p| p.render(&names)).collect();
        assert_eq!(hf, vec!["Y*T", "Y^2 - X*T"]);
        let hg: Vec<String> = g.homogenization().iter().map(|p| p.render(&names)).collect();
        assert_eq!(hg, vec!["X^2 - Y*T", "X*T"]);
    }

    #[test]
    fn bit_budget_reports_last_index() {
        let (f, g) = henon();
        let aut = RegularAutomorphism::new(f, g).unwrap();
        match aut.iterate(&pt("0,2"), 40, 1000) {
            Err(Error::BitBudget { last_index }) => assert!(last_index > 3),
            other => panic!("{other:?}"),
        }
    }
}
