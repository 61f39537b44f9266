//! JSON map definitions.
//!
//! ```json
//! {
//!   "label": "Henon",
//!   "dimension": 2,
//!   "variables": ["x", "y"],
//!   "forward": ["y", "y^2 - x"],
//!   "inverse": ["x^2 - y", "x"]
//! }
//! ```
//!
//! An optional `certificate` object `{ "m", "p", "q", "r" }` gives the
//! matrices as polynomial strings in the variables, with `T` added for `r`.
//! Without it a certificate is constructed (dimension 2 only).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{default_names, MultiPoly};
use crate::automorphism::{PolyMap, RegularAutomorphism};
use crate::certificate::{build_certificate_n2, Certificate};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSpec {
    pub m: u32,
    pub p: Vec<Vec<String>>,
    pub q: Vec<Vec<String>>,
    pub r: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    pub forward: Vec<String>,
    pub inverse: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSpec>,
}

/// A parsed map file: the polynomial maps, not yet validated.
#[derive(Clone, Debug)]
pub struct MapDefinition {
    pub spec: MapSpecFile,
    pub names: Vec<String>,
    pub forward: PolyMap,
    pub inverse: PolyMap,
    pub certificate: Option<Certificate>,
}

impl MapDefinition {
    pub fn label(&self) -> &str {
        self.spec.label.as_deref().unwrap_or("map")
    }

    pub fn names(&self) -> Vec<&str> {
        self.names.iter().map(String::as_str).collect()
    }

    /// Validate and return the automorphism with a verified certificate.
    pub fn automorphism(&self) -> Result<(RegularAutomorphism, Certificate)> {
        match &self.certificate {
            Some(c) => {
                let aut =
                    RegularAutomorphism::with_certificate(self.forward.clone(), self.inverse.clone(), c)?;
                Ok((aut, c.clone()))
            }
            None => {
                let aut = RegularAutomorphism::new(self.forward.clone(), self.inverse.clone())?;
                let c = build_certificate_n2(&aut)?;
                Ok((aut, c))
            }
        }
    }
}

/// Position of a parse error inside the file text.
fn locate(text: &str, literal: &str, err: Error) -> Error {
    let Error::Parse { column, message, .. } = err else {
        return err;
    };
    let quoted = serde_json::to_string(literal).expect("string serialises");
    match text.find(&quoted) {
        Some(pos) => {
            let before = &text[..pos];
            let line = before.matches('\n').count() + 1;
            let line_start = before.rfind('\n').map_or(0, |i| i + 1);
            let col = text[line_start..pos].chars().count() + 1 + column;
            Error::Parse {
                line,
                column: col,
                message,
            }
        }
        None => Error::Parse {
            line: 1,
            column,
            message,
        },
    }
}

fn parse_polys(text: &str, exprs: &[String], names: &[&str]) -> Result<Vec<MultiPoly>> {
    exprs
        .iter()
        .map(|s| MultiPoly::parse(s, names).map_err(|e| locate(text, s, e)))
        .collect()
}

pub fn parse_map_text(text: &str) -> Result<MapDefinition> {
    let spec: MapSpecFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let n = spec.dimension;
    if n == 0 {
        return Err(Error::Validation("dimension must be positive".into()));
    }
    let names = match &spec.variables {
        Some(v) => {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            v.clone()
        }
        None if n == 2 => vec!["x".into(), "y".into()],
        None => default_names(n),
    };
    for (what, comps) in [("forward", &spec.forward), ("inverse", &spec.inverse)] {
        if comps.len() != n {
            return Err(Error::Validation(format!(
                "{what} map has {} components, dimension is {n}",
                comps.len()
            )));
        }
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let forward = PolyMap::new(parse_polys(text, &spec.forward, &refs)?)?;
    let inverse = PolyMap::new(parse_polys(text, &spec.inverse, &refs)?)?;
    let certificate = match &spec.certificate {
        None => None,
        Some(c) => {
            if c.p.len() != n || c.q.len() != n || c.r.len() != n {
                return Err(Error::Validation("certificate matrices must be N x N".into()));
            }
            let mut with_t = refs.clone();
            with_t.push("T");
            let matrix = |rows: &Vec<Vec<String>>| -> Result<Vec<Vec<MultiPoly>>> {
                rows.iter()
                    .map(|row| {
                        if row.len() != n {
                            return Err(Error::Validation("certificate matrices must be N x N".into()));
                        }
                        parse_polys(text, row, &refs)
                    })
                    .collect()
            };
            Some(Certificate {
                m: c.m,
                p: matrix(&c.p)?,
                q: matrix(&c.q)?,
                r: parse_polys(text, &c.r, &with_t)?,
            })
        }
    };
    Ok(MapDefinition {
        spec,
        names,
        forward,
        inverse,
        certificate,
    })
}

pub fn load_map(path: &Path) -> Result<MapDefinition> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_map_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HENON: &str = r#"{
  "label": "Henon",
  "dimension": 2,
  "forward": ["y", "y^2 - x"],
  "inverse": ["x^2 - y", "x"]
}"#;

    #[test]
    fn loads_henon() {
        let m = parse_map_text(HENON).unwrap();
        let (aut, cert) = m.automorphism().unwrap();
        assert_eq!((aut.d(), aut.d_minus()), (2, 2));
        assert_eq!(cert.m, 2);
    }

    #[test]
    fn explicit_certificate() {
        let text = r#"{
  "dimension": 2,
  "forward": ["y", "y^2 - x"],
  "inverse": ["x^2 - y", "x"],
  "certificate": {"m": 3, "p": [["0", "0"], ["0", "y"]], "q": [["x", "0"], ["0", "0"]], "r": ["x*y", "x*y"]}
}"#;
        let m = parse_map_text(text).unwrap();
        assert!(m.automorphism().is_ok());
    }

    #[test]
    fn poly_error_is_located() {
        let text = "{\n  \"dimension\": 2,\n  \"forward\": [\"y\", \"y^2 - * x\"],\n  \"inverse\": [\"x^2 - y\", \"x\"]\n}";
        match parse_map_text(text) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 27);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_error_is_located() {
        assert!(matches!(
            parse_map_text("{\n  \"dimension\": 2,\n  oops\n}"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn elementary_is_rejected() {
        let text = r#"{"dimension": 2, "forward": ["x", "y + x^2"], "inverse": ["x", "y - x^2"]}"#;
        let err = parse_map_text(text).unwrap().automorphism().unwrap_err();
        assert_eq!(err.to_string(), "validation failed: not regular: common top-form factor X");
    }
}
