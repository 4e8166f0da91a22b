//! Named vertex operators built from a Lie algebra representation.

mod builders;
mod lie;

pub use builders::{
    build_euler, build_l_s, build_script_l, build_sl2_triple, build_theta, build_thetas, check_current_ope,
    current_algebra, ghost_algebra, level_algebra, rho_hat, sugawara, NamedOperatorSet, REngine, RState,
};
pub use lie::{abelian, builtin, mat_mul, sl2_adjoint, sl2_standard, LieRepSpec, Matrix};
