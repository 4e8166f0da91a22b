//! Expression language and verification suites behind the command line.

mod expr;
mod suites;

pub use expr::{parse, AtomKind, EvalContext, Expr, BUILTINS};
pub use suites::{partition_series, run_suite, IDENTITY_TRIPLES, SUITES, TAU_MAX_K, WEYL_COPIES, WEYL_DEGREE};
