//! Univariate polynomials over a field and gcds of binary forms.

use super::rat::Rat;

/// Minimal field interface used by the Euclidean algorithm.
pub trait Field: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl Field for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Element of the prime field `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    fn pow(self, mut e: u64) -> Self {
        let mut acc = Fp::new(1, self.p);
        let mut b = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp::new(0, self.p)
    }
    fn one_like(&self) -> Self {
        Fp::new(1, self.p)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp::new(((self.v as u128 + o.v as u128) % self.p as u128) as u64, self.p)
    }
    fn sub(&self, o: &Self) -> Self {
        Fp::new(
            ((self.v as u128 + self.p as u128 - o.v as u128) % self.p as u128) as u64,
            self.p,
        )
    }
    fn mul(&self, o: &Self) -> Self {
        Fp::new(((self.v as u128 * o.v as u128) % self.p as u128) as u64, self.p)
    }
    fn inv(&self) -> Self {
        assert!(self.v != 0, "inverse of zero in F_p");
        self.pow(self.p - 2)
    }
}

/// Coefficients from constant term upward, no trailing zeros.
pub fn trim<F: Field>(mut a: Vec<F>) -> Vec<F> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn monic<F: Field>(a: Vec<F>) -> Vec<F> {
    let a = trim(a);
    match a.last() {
        None => a,
        Some(lc) => {
            let inv = lc.inv();
            a.iter().map(|c| c.mul(&inv)).collect()
        }
    }
}

fn rem<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    let lead_inv = b.last().unwrap().inv();
    while r.len() >= b.len() {
        let q = r.last().unwrap().mul(&lead_inv);
        let shift = r.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&q.mul(bc));
        }
        r = trim(r);
    }
    r
}

/// Monic gcd; gcd(0, 0) = 0 (empty vector).
pub fn gcd<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

fn derivative<F: Field>(a: &[F]) -> Vec<F> {
    let mut out = Vec::new();
    for (i, c) in a.iter().enumerate().skip(1) {
        let mut k = c.zero_like();
        for _ in 0..i {
            k = k.add(c);
        }
        out.push(k);
    }
    trim(out)
}

fn exact_div<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return Vec::new();
    }
    let lead_inv = b.last().unwrap().inv();
    let mut q = vec![b[0].zero_like(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let c = r.last().unwrap().mul(&lead_inv);
        let shift = r.len() - b.len();
        q[shift] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&c.mul(bc));
        }
        r = trim(r);
    }
    trim(q)
}

/// Binary form `sum a_i X^(k-i) Y^i`, stored as `coeffs[i] = a_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm<F> {
    pub coeffs: Vec<F>,
}

/// gcd of binary forms up to a scalar: `Y^y_mult * H(X, Y)` where `H` is
/// the homogenisation of the monic univariate `h(t) = H(t, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormGcd<F> {
    pub y_mult: usize,
    pub h: Vec<F>,
}

impl<F: Field> FormGcd<F> {
    pub fn degree(&self) -> usize {
        self.y_mult + self.h.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// The same data with every repeated factor reduced to multiplicity one.
    pub fn radical(&self) -> FormGcd<F> {
        let h = if self.h.len() > 1 {
            let g = gcd(&self.h, &derivative(&self.h));
            if g.len() > 1 {
                monic(exact_div(&self.h, &g))
            } else {
                self.h.clone()
            }
        } else {
            self.h.clone()
        };
        FormGcd {
            y_mult: self.y_mult.min(1),
            h,
        }
    }

    /// Coefficients of `X^(k-i) Y^i` for the full form of degree `k`.
    pub fn form(&self) -> Vec<F> {
        let zero = self.h.first().expect("empty gcd used as form").zero_like();
        let mut out = vec![zero; self.degree() + 1];
        let dh = self.h.len() - 1;
        for (j, c) in self.h.iter().enumerate() {
            out[self.y_mult + dh - j] = c.clone();
        }
        out
    }
}

/// gcd of a list of binary forms given with their degrees; zero forms are
/// ignored. Returns `None` when every form is zero.
pub fn binary_form_gcd<F: Field>(forms: &[BinaryForm<F>]) -> Option<FormGcd<F>> {
    let mut acc: Option<FormGcd<F>> = None;
    for f in forms {
        let c = trim(f.coeffs.clone());
        if c.is_empty() {
            continue;
        }
        let k = f.coeffs.len() - 1;
        let s = f.coeffs.iter().take_while(|a| a.is_zero()).count();
        let uni: Vec<F> = (0..=k - s).map(|j| f.coeffs[k - j].clone()).collect();
        let uni = monic(uni);
        acc = Some(match acc {
            None => FormGcd { y_mult: s, h: uni },
            Some(g) => FormGcd {
                y_mult: g.y_mult.min(s),
                h: gcd(&g.h, &uni),
            },
        });
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::from_i64(v)
    }

    fn form(c: &[i64]) -> BinaryForm<Rat> {
        BinaryForm {
            coeffs: c.iter().map(|&v| r(v)).collect(),
        }
    }

    #[test]
    fn henon_top_forms_are_coprime() {
        let g = binary_form_gcd(&[form(&[0, 0, 1]), form(&[1, 0, 0])]).unwrap();
        assert!(g.is_constant());
    }

    #[test]
    fn elementary_top_forms_share_x() {
        let g = binary_form_gcd(&[form(&[1, 0, 0]), form(&[-1, 0, 0])]).unwrap();
        assert_eq!(g.degree(), 2);
        let rad = g.radical();
        assert_eq!(rad.degree(), 1);
        assert_eq!(rad.y_mult, 0);
        assert_eq!(rad.h, vec![r(0), r(1)]);
    }

    #[test]
    fn shared_y_factor() {
        let g = binary_form_gcd(&[form(&[0, 1, 0]), form(&[0, 0, 1])]).unwrap();
        assert_eq!(g.y_mult, 1);
        assert_eq!(g.degree(), 1);
    }

    #[test]
    fn gcd_mod_p_detects_collision() {
        // X^2 - Y^2 and X^2 + Y^2 - 2XY share X - Y over any field.
        let p = 5;
        let f = |c: &[i64]| BinaryForm {
            coeffs: c.iter().map(|&v| Fp::new(v.rem_euclid(p as i64) as u64, p)).collect(),
        };
        let g = binary_form_gcd(&[f(&[1, 0, -1]), f(&[1, -2, 1])]).unwrap();
        assert_eq!(g.degree(), 1);
        // X^2 + Y^2 and XY are coprime mod 5 but X^2+Y^2 = (X+2Y)(X-2Y) mod 5.
        let g = binary_form_gcd(&[f(&[1, 0, 1]), f(&[0, 1, 0])]).unwrap();
        assert!(g.is_constant());
    }
}
