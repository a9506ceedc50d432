//! Error type shared by every module in the crate.

use std::fmt;

/// Everything that can go wrong when evaluating the special functions,
/// series and quadratures in this crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Gamma evaluated at a nonpositive integer (within one ulp).
    PoleArgument { mu: f64 },
    /// Argument must be strictly positive.
    NonPositiveArgument { mu: f64 },
    /// Binary series operation on series with different variable tags.
    VariableMismatch { left: String, right: String },
    /// A term exponent outside the range the fractional derivative accepts.
    ExponentOutOfRange { exponent: f64 },
    /// Input outside the operation's domain.
    DomainError { message: String },
    /// Alternating-series cancellation exceeds the precision budget; the
    /// result would carry fewer than ~4 significant digits.
    CancellationLoss { condition: f64 },
    /// Hard safety stop on series length.
    MaxTermsExceeded { max_terms: usize },
    /// The integrand returned NaN or infinity at an interior node.
    NonFiniteSample { x: f64 },
    /// Polynomial degree beyond the overflow guard.
    DegreeTooLarge { n: u32 },
    /// A truncated partial sum whose tail estimate is above tolerance.
    TailNotNegligible { estimate: f64 },
    /// Generating-function parameter outside the convergence region.
    DivergentParameter { message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PoleArgument { mu } => {
                write!(f, "gamma pole: {mu} is a nonpositive integer")
            }
            Error::NonPositiveArgument { mu } => {
                write!(f, "argument must be positive, got {mu}")
            }
            Error::VariableMismatch { left, right } => {
                write!(f, "series variables differ: '{left}' vs '{right}'")
            }
            Error::ExponentOutOfRange { exponent } => {
                write!(
                    f,
                    "exponent {exponent} <= -1 not allowed under fractional differentiation"
                )
            }
            Error::DomainError { message } => write!(f, "domain error: {message}"),
            Error::CancellationLoss { condition } => {
                write!(
                    f,
                    "cancellation loss: series condition number {condition:.3e} exceeds the precision budget"
                )
            }
            Error::MaxTermsExceeded { max_terms } => {
                write!(f, "series did not converge within {max_terms} terms")
            }
            Error::NonFiniteSample { x } => {
                write!(f, "integrand returned a non-finite value at x = {x}")
            }
            Error::DegreeTooLarge { n } => {
                write!(f, "polynomial degree {n} exceeds the overflow guard (170)")
            }
            Error::TailNotNegligible { estimate } => {
                write!(
                    f,
                    "partial-sum tail estimate {estimate:.3e} is above tolerance"
                )
            }
            Error::DivergentParameter { message } => {
                write!(f, "divergent parameter: {message}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
