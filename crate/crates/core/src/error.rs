//! Crate-wide error type.

use std::fmt;

/// Errors surfaced by the exact computation kernels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Parameter `a` must be greater than -1 for the uniform interval to be nondegenerate.
    InvalidLeftEndpoint(String),
    /// Series reciprocal requires a unit constant term.
    NonInvertibleConstantTerm,
    /// Division of a series by `z` requires a vanishing constant term.
    NonzeroConstantTerm,
    /// Series logarithm requires constant term exactly one.
    ConstantTermNotOne,
    /// The requested formula divides by theta, which is zero here.
    DivisionByZeroTheta,
    /// Operation called outside its parameter domain.
    Domain(String),
    /// A table is too short for the requested index.
    Length { needed: usize, got: usize },
    /// The dynamic-programming oracle refuses to run past its configured cap.
    CapExceeded { n: usize, cap: usize },
    /// A polynomial division expected to be exact left a remainder.
    InexactDivision,
    /// No region formula applies; indicates a classification bug.
    Unreachable,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidLeftEndpoint(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NonInvertibleConstantTerm => {
                write!(f, "series has a non-invertible constant term")
            }
            Error::NonzeroConstantTerm => {
                write!(f, "series must have zero constant term to divide by z")
            }
            Error::ConstantTermNotOne => write!(f, "series must have constant term 1"),
            Error::DivisionByZeroTheta => write!(f, "formula is undefined at theta = 0"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Length { needed, got } => {
                write!(f, "table too short: need {needed} entries, have {got}")
            }
            Error::CapExceeded { n, cap } => {
                write!(f, "oracle cap exceeded: n = {n} > cap = {cap}")
            }
            Error::InexactDivision => write!(f, "polynomial division left a remainder"),
            Error::Unreachable => write!(f, "no region formula applies"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
