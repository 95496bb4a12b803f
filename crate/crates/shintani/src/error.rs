// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not unimodular (determinant {0})")]
    NonUnimodular(String),
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(i64),
    #[error("discriminants differ: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),
    #[error("matrix {0} is not in the semigroup S0({1})")]
    BadSemigroupElement(String, u64),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("coefficient ring must have 6 invertible")]
    BadCharacteristic,
    #[error("bad Hecke index {0}: {1}")]
    BadIndex(u64, String),
    #[error("2 is not invertible in the coefficient ring")]
    TwoNotInvertible,
    #[error("eigenvalue system is not rational (operator T_{0})")]
    IrrationalEigenvalue(u64),
    #[error("need moments up to degree {needed}, have {have}")]
    InsufficientMoments { needed: usize, have: usize },
    #[error("unresolvable slope gap at h = {0}")]
    SlopeGapUnresolvable(String),
    #[error("slope {0} is critical for weight {1}")]
    CriticalSlope(u32, u32),
    #[error("iteration did not converge (residual valuation {0})")]
    NoConvergence(u32),
    #[error("not an eigensymbol for T_{0} (residual valuation {1})")]
    NotEigen(u64, u32),
    #[error("precision mismatch: {0}")]
    PrecisionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
