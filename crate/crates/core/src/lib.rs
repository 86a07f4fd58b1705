//! Balance constants of m-bonacci words.
//!
//! The m-bonacci word is the fixed point of the substitution
//! `0 -> 01, 1 -> 02, ..., (m-2) -> 0(m-1), (m-1) -> 0` over the alphabet
//! `{0, ..., m-1}`. This crate computes, with certified arithmetic:
//!
//! * the word itself, its prefixes, Parikh data and prefix decompositions
//!   ([`words`]);
//! * rational enclosures of the dominant root `beta` and of all conjugate
//!   roots of `x^m - x^(m-1) - ... - x - 1` ([`spectral`]);
//! * exact symbolic discrepancy sums `g(a,k)`, their tail bounds and the
//!   resulting certified integer bounds on the per-letter balance constants
//!   ([`exactg`]);
//! * brute-force factor spreads, witness replay and the analytic global
//!   balance bound via quadrature ([`balance`], [`quadrature`]).

pub mod balance;
pub mod error;
pub mod exactg;
pub mod interval;
pub mod quadrature;
pub mod spectral;
pub mod transcend;
pub mod words;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Outcome of one named verification (lemma checks, audit steps).
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckReport {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            pass: true,
            detail: detail.into(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            pass: false,
            detail: detail.into(),
        }
    }
}
