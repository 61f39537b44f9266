use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rat::Rat;
use crate::error::{Error, Result};

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.iter().rev().cmp(self.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    /// The `i`-th coordinate variable.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rat::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: Rat) -> Self {
        assert_eq!(exps.len(), nvars, "exponent length mismatch");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(exps), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rat)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded reverse-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Rat> {
        self.terms.values()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, |m| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn homogeneous_part(&self, k: u32) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.nvars, "evaluation point has wrong dimension");
        let pw = PowerTable::new(self.nvars, max_exps(std::iter::once(self)), |i| x[i].clone());
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= pw.get(i, e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute `subs[i]` for variable `i`; aborts when an intermediate
    /// exceeds `term_budget` terms.
    pub fn compose(&self, subs: &[MultiPoly], term_budget: usize) -> Result<MultiPoly> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: subs.len(),
            });
        }
        let target = subs.first().map_or(0, |s| s.nvars);
        if subs.iter().any(|s| s.nvars != target) {
            return Err(Error::Input("substituted polynomials live in different rings".into()));
        }
        let maxe = max_exps(std::iter::once(self));
        let mut powers: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.nvars);
        for (i, s) in subs.iter().enumerate() {
            let mut row = vec![MultiPoly::one(target)];
            for _ in 0..maxe[i] {
                let next = row.last().unwrap() * s;
                check_budget(&next, term_budget)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                    check_budget(&t, term_budget)?;
                }
            }
            acc = &acc + &t;
            check_budget(&acc, term_budget)?;
        }
        Ok(acc)
    }

    /// `T^d p(X/T)` in one extra trailing variable.
    pub fn homogenize(&self, d: u32) -> Result<MultiPoly> {
        if self.degree() > d {
            return Err(Error::Input(format!(
                "cannot homogenize degree {} polynomial to degree {}",
                self.degree(),
                d
            )));
        }
        let mut out = MultiPoly::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.push(d - m.degree());
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Append `k` unused variables.
    pub fn extend_vars(&self, k: usize) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars + k,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.extend(std::iter::repeat_n(0, k));
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Set the last variable to zero and drop it.
    pub fn restrict_last_zero(&self) -> MultiPoly {
        assert!(self.nvars > 0);
        MultiPoly {
            nvars: self.nvars - 1,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| *m.0.last().unwrap() == 0)
                .map(|(m, c)| (Monomial(m.0[..m.0.len() - 1].to_vec()), c.clone()))
                .collect(),
        }
    }

    /// Exact division by variable `i`, if every term contains it.
    pub fn div_by_var(&self, i: usize) -> Option<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                return None;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            terms.insert(Monomial(e), c.clone());
        }
        Some(MultiPoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Largest absolute coefficient (0 for the zero polynomial).
    pub fn max_abs_coeff(&self) -> Rat {
        self.terms
            .values()
            .map(Rat::abs)
            .max()
            .unwrap_or_else(Rat::zero)
    }

    /// Sum of absolute coefficients.
    pub fn l1_norm(&self) -> Rat {
        self.terms.values().fold(Rat::zero(), |acc, c| acc + c.abs())
    }

    /// Render with the given variable names in canonical order (highest
    /// graded reverse-lex term first).
    pub fn render(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars, "wrong number of variable names");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.degree() == 0 {
                factors.push(a.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].to_string()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parse from text using the given variable names.
    pub fn parse(s: &str, names: &[&str]) -> Result<MultiPoly> {
        super::parse::parse_poly(s, names)
    }
}

/// Default variable names `X1..XN`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

fn check_budget(p: &MultiPoly, budget: usize) -> Result<()> {
    if p.num_terms() > budget {
        Err(Error::TermBudget { budget })
    } else {
        Ok(())
    }
}

/// Per-variable maximum exponent across polynomials.
pub(crate) fn max_exps<'a, I: Iterator<Item = &'a MultiPoly>>(polys: I) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::new();
    for p in polys {
        if out.len() < p.nvars {
            out.resize(p.nvars, 0);
        }
        for m in p.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                out[i] = out[i].max(e);
            }
        }
    }
    out
}

/// Cached powers `x_i^e` for `e <= max[i]`.
pub(crate) struct PowerTable<T> {
    rows: Vec<Vec<T>>,
}

impl<T: Clone> PowerTable<T>
where
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub(crate) fn new(n: usize, max: Vec<u32>, base: impl Fn(usize) -> T) -> Self {
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let m = max.get(i).copied().unwrap_or(0);
            let mut row = Vec::with_capacity(m as usize);
            if m >= 1 {
                row.push(base(i));
            }
            for _ in 1..m {
                let next = row.last().unwrap() * &row[0];
                row.push(next);
            }
            rows.push(row);
        }
        PowerTable { rows }
    }

    /// `x_i^e` for `1 <= e <= max[i]`.
    pub(crate) fn get(&self, i: usize, e: u32) -> &T {
        &self.rows[i][e as usize - 1]
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.render(&refs))
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn henon_component_eval() {
        let f2 = p("y^2 - x");
        assert_eq!(f2.eval(&[Rat::from_i64(1), Rat::from_i64(2)]), Rat::from_i64(3));
    }

    #[test]
    fn homogenize_henon() {
        let h = p("y^2 - x").homogenize(2).unwrap();
        let back = MultiPoly::parse("Y^2 - X*T", &["X", "Y", "T"]).unwrap();
        assert_eq!(h, back);
    }

    #[test]
    fn zero_polynomial_homogenizes_to_zero() {
        assert!(MultiPoly::zero(2).homogenize(3).unwrap().is_zero());
    }

    #[test]
    fn render_is_canonical() {
        let q = p("-x + y^2 + 3/4*x*y - 1");
        assert_eq!(q.render(&["x", "y"]), "3/4*x*y + y^2 - x - 1");
        assert_eq!(p(&q.render(&["x", "y"])), q);
    }

    #[test]
    fn compose_inverse() {
        let f = [p("y"), p("y^2 - x")];
        let g = [p("x^2 - y"), p("x")];
        for fi in &f {
            assert!(fi.compose(&g, 1000).is_ok());
        }
        let id0 = f[0].compose(&g, 1000).unwrap();
        let id1 = f[1].compose(&g, 1000).unwrap();
        assert_eq!(id0, p("x"));
        assert_eq!(id1, p("y"));
    }

    #[test]
    fn term_budget_is_enforced() {
        let q = p("x + y + 1");
        let r = q.compose(&[q.pow(5), q.pow(5)], 10);
        assert!(matches!(r, Err(Error::TermBudget { .. })));
    }
}
