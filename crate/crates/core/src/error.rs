//! Error types shared by the whole laboratory.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A state or intermediate value left the numeric domain (NaN/inf,
    /// non-positive imaginary part, ...).
    #[error("numeric domain error: {0}")]
    NumericDomain(String),

    /// A rejection sampler exhausted its attempt budget.
    #[error(
        "sampling failure: {accepted} accepted out of {attempts} attempts \
         (acceptance rate {rate:.4}) before the cap was reached"
    )]
    SamplingFailure {
        attempts: u64,
        accepted: u64,
        rate: f64,
    },

    /// Fundamental-domain reduction did not converge within the word cap.
    #[error(
        "reduction failure at point ({re}, {im}): word length cap {cap} exceeded \
         (partial word {partial:?})"
    )]
    ReductionFailure {
        re: f64,
        im: f64,
        cap: usize,
        partial: Vec<usize>,
    },

    /// Too few usable data points survived censoring/filtering for a fit.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
