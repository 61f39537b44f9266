//! Exact rational arithmetic and sparse multivariate polynomials.

pub mod forms;
pub mod linalg;
mod parse;
pub mod poly;
pub mod rat;

pub use poly::{default_names, Monomial, MultiPoly};
pub use rat::Rat;

/// Total bit size of a point, used for iteration budgets.
pub fn point_bits(x: &[Rat]) -> u64 {
    x.iter().map(Rat::bit_size).sum()
}

/// Parse a point written as `a/b,c/d,...`.
pub fn parse_point(s: &str) -> crate::Result<Vec<Rat>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<Rat>()
                .map_err(|e| crate::Error::Input(e.to_string()))
        })
        .collect()
}

/// Render a point as `a/b,c/d,...`.
pub fn render_point(x: &[Rat]) -> String {
    x.iter().map(Rat::to_string).collect::<Vec<_>>().join(",")
}
