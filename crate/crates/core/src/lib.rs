//! Canonical heights for regular polynomial automorphisms of affine space
//! over the rationals.
//!
//! A map `f` with inverse `f^-1` of degrees `d, d- >= 2` is validated
//! ([`automorphism`]), a certificate for the disjointness of its
//! indeterminacy loci is built or checked ([`certificate`]), local Green
//! functions are evaluated with certified error at every place of Q
//! ([`localgreen`]), and the canonical heights are assembled from them
//! ([`globalheight`]).

pub mod algebra;
pub mod automorphism;
pub mod certificate;
pub mod error;
pub mod globalheight;
pub mod interval;
pub mod localgreen;
pub mod mapfile;
pub mod places;

pub use error::{Error, ErrorKind, Result};
