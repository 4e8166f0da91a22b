//! State spaces of beta-gamma systems and current algebras, circle
//! products, Wick products, derivatives and OPEs.

mod algebra;
mod engine;
mod identities;
mod state;

pub use algebra::{var_weight, AlgebraKind, AlgebraSpec, Generator};
pub use engine::{binom, Engine, OpeTable};
pub use identities::{Identity, Membership};
pub use state::{monomial_weight, State};
