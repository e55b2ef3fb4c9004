//! Arbitrary-precision substrate: working-precision reals, exact rationals,
//! dense elimination and symmetric tridiagonal eigenvalues.

mod context;
mod linalg;
mod tridiag;

pub use context::{format_fixed, format_real, parse_real, BigReal, PrecisionContext};
pub use linalg::{cond_inf, solve_dense, DenseMatrix, LuFactors};
pub use rug::{Integer, Rational};
pub use tridiag::tridiag_eigenvalues;
