//! Meromorphic solutions of constant-coefficient linear difference equations,
//! exact rational solutions of polynomial-coefficient recurrences, and desk-scale
//! estimates of Nevanlinna functionals.
//!
//! The crate is organised bottom-up:
//!
//! - [`expr`]: expression trees in one complex variable (parse, print, evaluate,
//!   differentiate, shift).
//! - [`poly`]: dense univariate polynomials over any coefficient ring, exact
//!   rational algorithms (gcd, resultant, integer roots) and an Aberth–Ehrlich
//!   root finder with multiplicity clustering.
//! - [`operator`]: linear difference operators `Σ a_j f(z + j c)`, forward
//!   differences, mixed difference-differential operators and residual checks.
//! - [`solution`]: general solutions `Σ z^m ρ^{z/c} π(z)` built from the
//!   characteristic roots and period-`c` coefficient functions.
//! - [`nevanlinna`]: proximity, counting and characteristic functions, order,
//!   deficiency and zero counting by the argument principle.
//! - [`sharing`]: numerical CM/IM value-sharing verdicts inside a disk.
//! - [`rational`]: universal denominators and exact rational solutions of
//!   `Σ b_j(z) f(z + j) = b(z)`.
//!
//! Numerical kernels are generic over the real scalar (`f32`/`f64`) through
//! [`Real`], and polynomial arithmetic is generic over the coefficient ring; the
//! aliases below fix the concrete types used throughout the higher layers.

pub mod error;
pub mod expr;
pub mod format;
pub mod linalg;
pub mod nevanlinna;
pub mod operator;
pub mod poly;
pub mod rational;
pub mod sampling;
pub mod scalar;
pub mod sharing;
pub mod solution;
pub mod special;

pub use error::{Error, Result};
pub use expr::{EvalOutcome, Expr};
pub use scalar::Real;

/// A double-precision complex number.
pub type ComplexValue = num_complex::Complex64;
/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;
/// Exact polynomial with arbitrary-precision rational coefficients.
pub type RatPoly = poly::Poly<Rational>;
/// Polynomial with double-precision complex coefficients.
pub type ComplexPoly = poly::Poly<ComplexValue>;
