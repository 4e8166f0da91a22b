//! Exact scalars, sparse polynomials over typed variables, gradings,
//! derivations and fraction-free linear algebra.

mod grading;
pub mod linalg;
mod monomial;
mod polynomial;
mod scalar;
mod text;
mod var;

pub use grading::{grade_components, homogeneous_grade, GradingDescriptor};
pub use linalg::{inverse, matrix_rank, rational_matrix_kernel, sparse_kernel, Echelon, SparseRow};
pub use monomial::Monomial;
pub use polynomial::{apply_derivation, poly_arith, ArithOp, Polynomial};
pub use scalar::Scalar;
pub use text::parse_polynomial;
pub use var::{Family, Universe, VarId};
