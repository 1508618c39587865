use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("expression uses variable `{found}` at byte {offset}, expected `{expected}`")]
    WrongVariable {
        found: String,
        expected: String,
        offset: usize,
    },

    #[error("domain error: {what} at x = {at}")]
    Domain { what: String, at: f64 },

    #[error("non-finite result at x = {at}")]
    Overflow { at: f64 },

    #[error("h is not symmetric: |h(t) - h(1/t)| = {residual:e} at t = {t}")]
    SymmetryViolation { t: f64, residual: f64 },

    #[error("h'(1) = {value:e} is not zero")]
    NonStationaryAtOne { value: f64 },

    #[error("deformation gradient has non-positive determinant {det}")]
    NonPositiveDeterminant { det: f64 },

    #[error("finite-difference stencil leaves GL+(2); shrink the step")]
    LeftGlPlus,

    #[error("unknown catalog id `{0}`")]
    UnknownCatalogId(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
