//! Exact computations in beta-gamma systems and current algebras: circle
//! products and OPEs, the associated graded functor, sl(2) invariant theory
//! on the graded ring, and Groebner normal forms for its relation ideal.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod gr_bridge;
pub mod groebner;
pub mod invariant_ring;
pub mod report;
pub mod scalar_poly;
pub mod structures;
pub mod vertex_engine;

pub use error::{Error, Result};
pub use scalar_poly::{Monomial, Polynomial, Scalar, VarId};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;
/// Polynomials with arbitrary-precision rational coefficients.
pub type Poly = Polynomial<Rational>;
