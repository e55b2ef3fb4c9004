//! Orthogonal polynomials for the singular measure of Minkowski's question
//! mark function.
//!
//! Recurrence coefficients are computed by two independent routes: the
//! discretized Stieltjes procedure on the uniform measure over a level of
//! the Stern-Brocot tree ([`recurrence::stieltjes`]) and the Chebyshev
//! algorithm applied to moments obtained from truncated infinite linear
//! systems ([`moments::solve_moments`], [`recurrence::chebyshev`]).

pub mod error;
pub mod farey;
pub mod measure;
pub mod moments;
pub mod numerics;
pub mod qfunc;
pub mod recurrence;

pub use error::{Error, Result};
