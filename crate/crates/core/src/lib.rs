//! Exact symbolic engine for weighted densities on the line and the circle:
//! invariant bilinear differential operators, first cohomology of vector
//! field algebras with differential-operator coefficients, and equivariant
//! quantization maps.
//!
//! All arithmetic is exact. The core is generic over the coefficient field;
//! the aliases below fix the two fields used in practice.

pub mod cohomology;
pub mod corealg;
pub mod diffops;
pub mod error;
pub mod invariance;
pub mod jets;
pub mod liealg;
pub mod quantization;

pub use corealg::{GaussRat, Mode, Rat};
pub use error::{CoreError, Result};

/// Rational function in the formal weight parameter `t` with Gaussian
/// rational coefficients.
pub type Scalar = corealg::RatFunc<GaussRat>;
/// Polynomial in the formal weight parameter.
pub type ParamPoly = corealg::Poly<GaussRat>;
/// Coefficient function with formal-weight coefficients.
pub type ScalarFunc = corealg::Func<Scalar>;
