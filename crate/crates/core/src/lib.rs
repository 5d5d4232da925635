//! Function approximation by matching characteristic numbers.
//!
//! A target function is reduced to a finite sequence of characteristic
//! numbers `c_0..c_N` (derivatives at a point, moments, endpoint derivative
//! differences, node values, ...). Each expansion family maps those numbers
//! to coefficients of a fixed functional form, and every resulting
//! approximant can be measured again under the same functionals, which is
//! how [`framework::verify_matching`] checks the construction.
//!
//! Most numerical code is generic over [`Scalar`], implemented for `f64` and
//! for exact [`Rational`] numbers. Rational evaluation succeeds whenever every
//! transcendental primitive is hit at a point with a rational value (for
//! example `exp(0)` or `ln(1)`), which covers derivative matching at the
//! origin for all the usual test functions.

pub mod error;
pub mod expansions;
pub mod framework;
pub mod integral_match;
pub mod jets;
pub mod poly;
pub mod scalar;
pub mod specfun;
pub mod ws_interp;

pub use error::{Error, Result};
pub use poly::Poly;
pub use scalar::{Rational, Scalar};
