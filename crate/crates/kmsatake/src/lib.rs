//! Exact spherical functions for Kac-Moody root data.
//!
//! Given a generalized Cartan matrix together with a realization lattice,
//! this crate computes the spherical (Satake) image of a Hecke basis
//! element by two independent algorithms, along with the supporting
//! objects: the kernel `Delta`, its Weyl twists, the symmetrizer
//! coefficient `Gamma`, the multiplier `m_sigma`, Hall-Littlewood series
//! `H_lambda`, and a verifier for the rank-one local identities. All
//! arithmetic is exact (arbitrary-precision integers and rationals);
//! infinite objects are handled through truncated series whose windows
//! certify which coefficients are exact.
//!
//! The long-form guide lives in `book/` and is doctested through the
//! [`guide`] module. For a quick start:
//!
//! ```
//! use kmsatake::root_datum::{RootDatum, RootDatumConfig};
//! use kmsatake::satake::{satake, Route, QMode};
//!
//! let rd = RootDatum::build(RootDatumConfig::from_json_str(
//!     r#"{ "cartan": [[2, -1], [-1, 2]] }"#).unwrap()).unwrap();
//! // lambda = alpha_1^vee + alpha_2^vee in coweight coordinates
//! let s = satake(&rd, &[1, 1], 3, Route::Both, QMode::Symbolic).unwrap();
//! assert!(!s.series.is_empty());
//! ```

// index loops over small matrices are clearer than iterator chains here
#![allow(clippy::needless_range_loop)]

pub mod dl;
pub mod guide;
pub mod io;
pub mod param;
pub mod root_datum;
pub mod satake;
pub mod series;
pub mod symm;
pub mod tables;
#[cfg(test)]
pub(crate) mod testutil;
pub mod weyl;

use thiserror::Error as ThisError;

/// Errors surfaced by validation, arithmetic contracts and resource caps.
#[derive(ThisError, Debug)]
pub enum Error {
    #[error("not a generalized Cartan matrix: {0}")]
    Gcm(String),
    #[error("realization mismatch: {0}")]
    Realization(String),
    #[error("rho is {0}; supply an explicit \"rho\" entry in the config")]
    Rho(String),
    #[error("index {0} out of range (rank {1})")]
    IndexOutOfRange(usize, usize),
    #[error("vector has {0} coordinates, lattice rank is {1}")]
    DimensionMismatch(usize, usize),
    #[error("element count {0} exceeds the cap {1}; raise --element-cap if intended")]
    CapExceeded(usize, usize),
    #[error("{0} is not a dominant coweight")]
    NotDominant(String),
    #[error("{0} is not regular dominant")]
    NotRegular(String),
    #[error("not a real coroot: {0}")]
    NotRealCoroot(String),
    #[error("leading coefficient is not a unit monomial: {0}")]
    NonUnitLeading(String),
    #[error("series window violation: {0}")]
    Window(String),
    #[error("incompatible lattices: {0}")]
    IncompatibleLattice(String),
    #[error("substitution rejected: {0}")]
    BadSubstitution(String),
    #[error("operation requires equal parameters (config \"parameters\": \"equal\")")]
    UnequalParameters,
    #[error("w is not a minimal coset representative for this lambda")]
    NotMinimalRep,
    #[error("exact division left a remainder; parameter classes are inconsistent: {0}")]
    DivisionRemainder(String),
    #[error("route results disagree: {0}")]
    RouteMismatch(String),
    #[error("negative multiplicity for imaginary coroot")]
    NegativeMultiplicity,
    #[error("config error: {0}")]
    Config(String),
    #[error("operation needs a windowed series (exact unwindowed polynomial given)")]
    Unwindowed,
}

pub type Result<T> = std::result::Result<T, Error>;
