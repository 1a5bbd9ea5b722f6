use core::fmt;

use crate::expr::{EvalError, ParseError};

pub type Result<T> = core::result::Result<T, Error>;

/// Failure of a numerical or validation step.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of the operation.
    Domain(&'static str),
    /// Result is not representable as a finite `f64`.
    Overflow(&'static str),
    /// An integral that has to be finite is infinite.
    Divergent(&'static str),
    /// An adaptive or iterative scheme missed its tolerance.
    NonConvergence(&'static str),
    /// Malformed problem data.
    InvalidInput(&'static str),
    Parse(ParseError),
    Eval(EvalError),
    /// `‖f'‖ = 0` in a Rayleigh quotient.
    ZeroDerivativeNorm,
    /// `μ` has no mass on `(0, D)`.
    ZeroMass,
    /// `v g'^{p-1} g` does not vanish at the ends of the sample grid.
    BoundaryCondition,
    /// The quantity is not defined for these exponents.
    NotApplicable(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Overflow(m) => write!(f, "overflow: {m}"),
            Error::Divergent(m) => write!(f, "divergent: {m}"),
            Error::NonConvergence(m) => write!(f, "no convergence: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::Parse(e) => write!(f, "{e}"),
            Error::Eval(e) => write!(f, "evaluation error: {e}"),
            Error::ZeroDerivativeNorm => write!(f, "derivative norm is zero"),
            Error::ZeroMass => write!(f, "mu has zero mass"),
            Error::BoundaryCondition => write!(f, "boundary condition v g'^(p-1) g -> 0 violated"),
            Error::NotApplicable(m) => write!(f, "not applicable: {m}"),
        }
    }
}

impl From<EvalError> for Error {
    fn from(e: EvalError) -> Self {
        Error::Eval(e)
    }
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}

impl core::error::Error for Error {}
