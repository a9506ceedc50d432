//! Numerical kernels for the Mittag-Leffler function and its associated
//! polynomial families: fractional heat polynomials, fractional two-variable
//! Laguerre polynomials, the Wright function, one-sided Lévy stable
//! subordination, and a series solver for fractional diffusion of
//! polynomial initial data.
//!
//! Everything is plain f64 on the outside; internally the cancellation-heavy
//! series run on double-double accumulation with reciprocal-gamma
//! coefficients accurate to ~31 digits, and every evaluation reports an
//! absolute error estimate plus a cancellation condition number instead of
//! silently degrading.

pub mod dd;
pub mod error;
pub mod gamma;
pub mod quad;
pub mod series;

pub use error::{Error, Result};
