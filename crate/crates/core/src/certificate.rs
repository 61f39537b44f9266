//! Nullstellensatz certificates `Σ P F + Σ Q G + T R = X_i^m` and the
//! per-place constants derived from them.

use serde::{Deserialize, Serialize};

use crate::algebra::{linalg, MultiPoly, Rat};
use crate::automorphism::{PolyMap, RegularAutomorphism};
use crate::error::{Error, Result};
use crate::places::{good_reduction_test, LogConst, Place, Verdict};

/// Certificate for the top forms of `f` and `f^-1`.
///
/// `p` and `q` are `N x N` matrices of forms in the affine variables; `r`
/// holds forms in the affine variables followed by `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub m: u32,
    pub p: Vec<Vec<MultiPoly>>,
    pub q: Vec<Vec<MultiPoly>>,
    pub r: Vec<MultiPoly>,
}

impl Certificate {
    pub fn coefficients(&self) -> impl Iterator<Item = &Rat> {
        self.p
            .iter()
            .chain(self.q.iter())
            .flatten()
            .chain(self.r.iter())
            .flat_map(MultiPoly::coefficients)
    }
}

fn check_form(p: &MultiPoly, nvars: usize, degree: Option<u32>, what: &str) -> Result<()> {
    if p.nvars() != nvars {
        return Err(Error::DimensionMismatch {
            expected: nvars,
            found: p.nvars(),
        });
    }
    if p.is_zero() {
        return Ok(());
    }
    match degree {
        Some(k) if p.is_homogeneous() && p.degree() == k => Ok(()),
        Some(k) => Err(Error::Input(format!("{what} must be homogeneous of degree {k}"))),
        None => Err(Error::Input(format!("{what} must vanish (negative degree)"))),
    }
}

/// Exact check of the `N` identities. Wrong shapes or degrees are input
/// errors; a well-formed certificate that fails the identity gives `false`.
pub fn verify_certificate(aut: &RegularAutomorphism, cert: &Certificate) -> Result<bool> {
    let n = aut.dim();
    let (d, dm, m) = (aut.d(), aut.d_minus(), cert.m);
    let rows_ok = |mat: &Vec<Vec<MultiPoly>>| mat.len() == n && mat.iter().all(|r| r.len() == n);
    if !rows_ok(&cert.p) || !rows_ok(&cert.q) || cert.r.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: cert.r.len(),
        });
    }
    if m == 0 {
        return Err(Error::Input("certificate exponent m must be positive".into()));
    }
    for i in 0..n {
        for j in 0..n {
            check_form(&cert.p[i][j], n, m.checked_sub(d), "P entry")?;
            check_form(&cert.q[i][j], n, m.checked_sub(dm), "Q entry")?;
        }
        check_form(&cert.r[i], n + 1, Some(m - 1), "R entry")?;
    }
    let fh = aut.forward().homogenization();
    let gh = aut.inverse().homogenization();
    let t = MultiPoly::var(n + 1, n);
    for i in 0..n {
        let mut lhs = &t * &cert.r[i];
        for j in 0..n {
            lhs = &lhs + &(&cert.p[i][j].extend_vars(1) * &fh[j]);
            lhs = &lhs + &(&cert.q[i][j].extend_vars(1) * &gh[j]);
        }
        let mut e = vec![0; n + 1];
        e[i] = m;
        if lhs != MultiPoly::monomial(n + 1, e, Rat::one()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exponent vectors of total degree `k` in `n` variables.
pub(crate) fn monomials_of_degree(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in monomials_of_degree(n - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Build a certificate in dimension 2 by exact linear algebra on the
/// degree-`m` slice, increasing `m` until every `X_i^m` lies in the span
/// of the shifted top forms.
pub fn build_certificate_n2(aut: &RegularAutomorphism) -> Result<Certificate> {
    let n = aut.dim();
    if n != 2 {
        return Err(Error::Input(
            "certificate construction is implemented for N = 2 only".into(),
        ));
    }
    let (d, dm) = (aut.d(), aut.d_minus());
    let ftop = aut.forward().top_forms();
    let gtop = aut.inverse().top_forms();
    // Generators: (is_forward, j, multiplier monomial), paired with the
    // product form.
    for m in d.min(dm)..=(d + dm + 1) {
        let target_monos = monomials_of_degree(n, m);
        let mut gens: Vec<(bool, usize, Vec<u32>)> = Vec::new();
        let mut cols: Vec<MultiPoly> = Vec::new();
        for (forward, tops, deg) in [(true, &ftop, d), (false, &gtop, dm)] {
            let Some(k) = m.checked_sub(deg) else { continue };
            for (j, top) in tops.iter().enumerate() {
                if top.is_zero() {
                    continue;
                }
                for mono in monomials_of_degree(n, k) {
                    cols.push(&MultiPoly::monomial(n, mono.clone(), Rat::one()) * top);
                    gens.push((forward, j, mono));
                }
            }
        }
        let a: Vec<Vec<Rat>> = target_monos
            .iter()
            .map(|t| cols.iter().map(|c| c.coeff(t)).collect())
            .collect();
        let mut sols = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = m;
            let b: Vec<Rat> = target_monos
                .iter()
                .map(|t| if *t == e { Rat::one() } else { Rat::zero() })
                .collect();
            match linalg::solve(&a, &b, cols.len()) {
                Some(x) => sols.push(x),
                None => break,
            }
        }
        if sols.len() < n {
            continue;
        }
        return Ok(lift(aut, m, &gens, &sols));
    }
    Err(Error::Validation(
        "top forms share a zero: no certificate exists".into(),
    ))
}

fn lift(
    aut: &RegularAutomorphism,
    m: u32,
    gens: &[(bool, usize, Vec<u32>)],
    sols: &[Vec<Rat>],
) -> Certificate {
    let n = aut.dim();
    let zero = MultiPoly::zero(n);
    let mut p = vec![vec![zero.clone(); n]; n];
    let mut q = vec![vec![zero; n]; n];
    for (i, x) in sols.iter().enumerate() {
        for ((forward, j, mono), c) in gens.iter().zip(x) {
            let term = MultiPoly::monomial(n, mono.clone(), c.clone());
            let slot = if *forward { &mut p[i][*j] } else { &mut q[i][*j] };
            *slot = &*slot + &term;
        }
    }
    let fh = aut.forward().homogenization();
    let gh = aut.inverse().homogenization();
    let r = (0..n)
        .map(|i| {
            let mut e = vec![0; n + 1];
            e[i] = m;
            let mut rest = MultiPoly::monomial(n + 1, e, Rat::one());
            for j in 0..n {
                rest = &rest - &(&p[i][j].extend_vars(1) * &fh[j]);
                rest = &rest - &(&q[i][j].extend_vars(1) * &gh[j]);
            }
            rest.div_by_var(n)
                .expect("top-form identity leaves a multiple of T")
        })
        .collect();
    Certificate { m, p, q, r }
}

/// Constants of the filtration and Green-function bounds at one place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceConstants {
    pub place: Place,
    /// `C_v >= 1`.
    pub c: Rat,
    pub epsilon: Rat,
    pub delta: Rat,
    /// Strictly smaller `epsilon` used for escape classification.
    pub epsilon_strict: Rat,
    pub c_plus: LogConst,
    pub c_minus: LogConst,
    /// `epsilon/2` at infinity, `epsilon/p` at `p`.
    pub epsilon_loose: Rat,
    /// Lower-bound constants for `(epsilon_loose, delta)`.
    pub c_plus_loose: LogConst,
    pub c_minus_loose: LogConst,
    pub c_f: LogConst,
    pub c_finv: LogConst,
    /// Good reduction forced `C = 1` although the stored certificate is not
    /// `p`-integral.
    pub good_override: bool,
}

fn archimedean_c_prime(aut: &RegularAutomorphism, cert: &Certificate) -> Rat {
    let n = aut.dim() as u64;
    let m = cert.m as u64;
    let norm = |mat: &Vec<Vec<MultiPoly>>| {
        mat.iter()
            .flatten()
            .map(MultiPoly::max_abs_coeff)
            .max()
            .unwrap_or_else(Rat::zero)
    };
    let mut best = Rat::one();
    if let Some(k) = m.checked_sub(aut.d() as u64) {
        best = Rat::max(best, Rat::binomial(n + k - 1, k) * norm(&cert.p));
    }
    if let Some(k) = m.checked_sub(aut.d_minus() as u64) {
        best = Rat::max(best, Rat::binomial(n + k - 1, k) * norm(&cert.q));
    }
    let rn = cert
        .r
        .iter()
        .map(MultiPoly::max_abs_coeff)
        .max()
        .unwrap_or_else(Rat::zero);
    Rat::max(best, Rat::binomial(n + m, m - 1) * rn)
}

/// `c_f = log max{C'_f, 1} / (d - 1)`.
///
/// At the archimedean place `C'_f` is the larger of the monomial-count
/// bound and the largest coefficient 1-norm of a component; the latter
/// bounds `|F_i(w)| / ||w||^d` directly.
pub fn upper_bound_constant(f: &PolyMap, place: Place) -> LogConst {
    let d = f.degree();
    let coef = Rat::new(1, d as i64 - 1);
    let c_prime = match place {
        Place::Finite(_) => f
            .coefficients()
            .map(|c| place.abs(c))
            .max()
            .unwrap_or_else(Rat::zero),
        Place::Archimedean => {
            let n = f.dim() as u64;
            let sup = f
                .components()
                .iter()
                .map(MultiPoly::max_abs_coeff)
                .max()
                .unwrap_or_else(Rat::zero);
            let l1 = f
                .components()
                .iter()
                .map(MultiPoly::l1_norm)
                .max()
                .unwrap_or_else(Rat::zero);
            Rat::max(Rat::binomial(n + d as u64 - 1, d as u64) * sup, l1)
        }
    };
    LogConst::new(coef, Rat::max(c_prime, Rat::one()), place)
}

/// Constants at `place`, with `ε = C^-k`, `δ = C^-k(k-1)`, `k = min(d, d-)`.
pub fn place_constants(
    aut: &RegularAutomorphism,
    cert: &Certificate,
    place: Place,
) -> PlaceConstants {
    let mut good_override = false;
    let c = match place {
        Place::Archimedean => Rat::from_u64(2 * aut.dim() as u64 + 1) * archimedean_c_prime(aut, cert),
        Place::Finite(_) => {
            let raw = cert
                .coefficients()
                .map(|c| place.abs(c))
                .fold(Rat::one(), Rat::max);
            if !raw.is_one() && good_reduction_test(aut, cert, place.prime().unwrap()).verdict == Verdict::Good {
                good_override = true;
                Rat::one()
            } else {
                raw
            }
        }
    };
    let (d, dm) = (aut.d(), aut.d_minus());
    let k = d.min(dm) as i64;
    let epsilon = c.powi(-k);
    let delta = c.powi(-k * (k - 1));
    let epsilon_strict = if c.is_one() {
        Rat::new(1, 2)
    } else {
        c.powi(-k - 1)
    };
    let lower = |e: &Rat, deg: u32| {
        LogConst::new(
            Rat::new(1, deg as i64 - 1),
            Rat::min(delta.clone(), e.pow(deg as u64)),
            place,
        )
    };
    // The loose parameter is ε/2 at infinity and ε/p at p, so finite-place
    // constants stay exact multiples of log p.
    let shrink = place.prime().map_or(Rat::from_i64(2), Rat::from_u64);
    let epsilon_loose = &epsilon / &shrink;
    PlaceConstants {
        place,
        c_plus: lower(&epsilon, d),
        c_minus: lower(&epsilon, dm),
        c_plus_loose: lower(&epsilon_loose, d),
        c_minus_loose: lower(&epsilon_loose, dm),
        c_f: upper_bound_constant(aut.forward(), place),
        c_finv: upper_bound_constant(aut.inverse(), place),
        c,
        epsilon,
        delta,
        epsilon_strict,
        epsilon_loose,
        good_override,
    }
}
