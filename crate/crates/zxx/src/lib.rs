//! Classification and explicit factorization of integer polynomials in
//! `Z[[x]]`, the ring of formal power series with integer coefficients.
//!
//! A polynomial is a unit in `Z[[x]]` iff its constant term is `±1`, and it
//! is called reducible iff it splits into two series whose constant terms
//! both differ from `±1`. This crate decides the question where sufficient
//! conditions are known (always for degree at most 3), and for every
//! reducible input produces a truncated factorization together with a
//! certificate that can be re-verified by multiplying the factors back.

pub mod batch;
pub mod classify;
pub mod factorize;
pub mod padic;
pub mod parse;
pub mod polyring;
pub mod series;

mod intutil;

pub use classify::{classify, Classification, NormalForm, Rule, Verdict};
pub use factorize::{factor, verify_certificate, FactorOutcome, FactorizationCertificate};
pub use padic::{hensel_lift, roots_in_zp, vp, PAdicRoot, Prime, Valuation};
pub use polyring::IntPoly;
pub use series::TruncatedSeries;

use thiserror::Error;

/// Default truncation order used when the caller does not choose one.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Error)]
pub enum Error {
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("Hensel condition fails: theta = {theta}, v_p(f(r0)) = {value_valuation:?}")]
    HenselConditionFails {
        theta: u64,
        value_valuation: Option<u64>,
    },
    #[error("not a unit in Z[[x]]")]
    NotAUnit,
    #[error("the zero polynomial has no classification")]
    ZeroPolynomial,
    #[error("constant term {0} is handled by the classification driver")]
    HandledByDriver(String),
    #[error("operation does not apply: {0}")]
    NotApplicable(String),
    #[error("factorization cannot be normalized: {0}")]
    NotNormalizable(String),
    #[error("syntax error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("internal contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
