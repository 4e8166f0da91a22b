//! Invariant theory on the associated graded ring of the ghost system for
//! `sl(2)` acting on itself.

mod checks;
mod component;
mod weyl;

pub use checks::{
    creation_weight, derivation_kernel, howe_dims, independence_witness, invariant_kernel, jacobian_rank, tau_monomial_count,
    verify_invariant_components, weight_monomials, weight_zero_invariants, ComponentRow, HoweRow, Independence, LoopAction,
};
pub use component::{enumerate_monomials, joint_kernel, w_module, Bound, ComponentSpec, JointKernel};
pub use weyl::{
    epsilon, epsilon_support_q, epsilon_support_tau, modules, pair_q, plucker_relations, plucker_relations_for, q_of,
    q_poly, standard_q, tau, tau0, tau_family, tau_from_q, verify_weyl, weyl_generators, EpsilonSupport, Module,
    PluckerRelation, WeylRow,
};
