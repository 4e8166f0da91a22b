//! The associated graded ring of a filtered state space: projections into
//! it, the induced derivations, and lifts back to states.

mod tables;

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar_poly::{apply_derivation, Family, Monomial, Scalar, VarId};
use crate::structures::{build_sl2_triple, build_theta, LieRepSpec, REngine, RState};
use crate::vertex_engine::{AlgebraKind, AlgebraSpec, Generator, State};
use crate::{Poly, Rational};

pub use tables::{corrected_table, falling_factorial, printed_table, TableOp};

/// A state space with its degree filtration, rescaled by `scale`, and the
/// invariant `k` of the generators (`None` when every nonnegative product of
/// generators vanishes).
#[derive(Clone, Debug)]
pub struct FiltrationSpec {
    pub algebra: Arc<AlgebraSpec<Rational>>,
    pub scale: u32,
    pub k: Option<i64>,
}

impl FiltrationSpec {
    pub fn new(engine: &REngine, scale: u32) -> Result<Self> {
        if scale == 0 {
            return Err(Error::InvalidSpec("filtration scale must be positive".into()));
        }
        let mut f = FiltrationSpec { algebra: engine.algebra().clone(), scale, k: None };
        f.k = k_invariant(&f, &generators(engine)?, engine)?;
        Ok(f)
    }
}

/// The weight-one and weight-zero generators of the algebra at mode `-1`.
pub fn generators(engine: &REngine) -> Result<Vec<RState>> {
    let alg = engine.algebra();
    let gens: Vec<Generator> = match alg.kind {
        AlgebraKind::GhostSystem => (0..alg.dim).flat_map(|i| [Generator::Beta(i), Generator::Gamma(i)]).collect(),
        AlgebraKind::CurrentAlgebra => (0..alg.dim).map(Generator::Current).collect(),
    };
    gens.into_iter().map(|g| engine.generator(g, 0)).collect()
}

/// Largest number of creation variables in a monomial, times the scale.
pub fn filtration_degree(a: &RState, f: &FiltrationSpec) -> i64 {
    a.value.monomials().map(|m| m.degree() as i64).max().unwrap_or(0) * f.scale as i64
}

fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, i| acc * Rational::from_i64(i))
}

/// The graded variable `v_k` paired with the creation variable `v(-k-1)`;
/// current variables keep their family.
pub fn gr_var(v: &VarId) -> VarId {
    match v.family {
        Family::BetaMode => VarId { family: Family::GrBeta, ..*v },
        Family::GammaMode => VarId { family: Family::GrGamma, ..*v },
        _ => *v,
    }
}

/// Inverse of [`gr_var`].
pub fn mode_var(v: &VarId) -> VarId {
    match v.family {
        Family::GrBeta => VarId { family: Family::BetaMode, ..*v },
        Family::GrGamma => VarId { family: Family::GammaMode, ..*v },
        _ => *v,
    }
}

/// `phi_d`: keeps monomials of filtration degree exactly `d` and sends
/// `v(-k-1)` to `v_k / k!`.
pub fn phi(a: &RState, d: i64, f: &FiltrationSpec) -> Result<Poly> {
    let top = filtration_degree(a, f);
    if top > d {
        return Err(Error::Precondition(format!("state has filtration degree {top} > {d}")));
    }
    let mut out = Poly::zero();
    for (m, c) in a.value.terms() {
        if m.degree() as i64 * f.scale as i64 != d {
            continue;
        }
        let mut coeff = c.clone();
        for (v, e) in m.factors() {
            for _ in 0..*e {
                coeff /= factorial(v.level);
            }
        }
        out.add_term(m.map_vars(|v| gr_var(&v)), coeff);
    }
    Ok(out)
}

/// The derivation `v_k -> v_{k+1}` of the graded ring.
pub fn gr_derivative(p: &Poly) -> Poly {
    let rules: HashMap<VarId, Poly> =
        p.vars().into_iter().map(|v| (v, Poly::var(VarId { level: v.level + 1, ..v }))).collect();
    apply_derivation(&rules, p)
}

/// Lifts a graded polynomial to a state: `v_k -> k! v(-k-1)`, monomials to
/// Wick products of the lifted variables.
pub fn lift(p: &Poly, engine: &REngine) -> Result<RState> {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let mut coeff = c.clone();
        for (v, e) in m.factors() {
            if !matches!(v.family, Family::GrBeta | Family::GrGamma | Family::CurrentMode) {
                return Err(Error::Precondition(format!("{v} is not a graded generator")));
            }
            for _ in 0..*e {
                coeff *= factorial(v.level);
            }
        }
        out.add_term(m.map_vars(|v| mode_var(&v)), coeff);
    }
    engine.state(out)
}

/// Canonical lifts of homogeneous graded generators; each satisfies
/// `phi(lift(g), deg g) = g`.
pub fn lift_gr_generators(gens: &[Poly], engine: &REngine) -> Result<Vec<RState>> {
    gens.iter()
        .map(|g| {
            let mut acc = State::zero(engine.algebra());
            for (m, c) in g.terms() {
                let items: Vec<RState> = m
                    .expanded()
                    .into_iter()
                    .map(|v| lift(&Poly::var(v), engine))
                    .collect::<Result<_>>()?;
                acc = acc.try_add(&engine.iterated_wick(&items)?.scale(c))?;
            }
            Ok(acc)
        })
        .collect()
}

/// Minimum of `deg a + deg b - deg(a o_n b)` over generator pairs and
/// `n >= 0` with nonzero product.
pub fn k_invariant(f: &FiltrationSpec, gens: &[RState], engine: &REngine) -> Result<Option<i64>> {
    let mut best: Option<i64> = None;
    for a in gens {
        for b in gens {
            let top = a.weight()? + b.weight()? - 1;
            for n in 0..=top {
                let p = engine.apply_mode(a, n, b)?;
                if p.is_zero() {
                    continue;
                }
                let drop = filtration_degree(a, f) + filtration_degree(b, f) - filtration_degree(&p, f);
                best = Some(best.map_or(drop, |x: i64| x.min(drop)));
            }
        }
    }
    Ok(best)
}

fn homogeneous_degree(p: &Poly) -> Result<i64> {
    let mut ds = p.monomials().map(|m| m.degree() as i64);
    let Some(first) = ds.next() else { return Ok(0) };
    if ds.all(|d| d == first) {
        Ok(first)
    } else {
        Err(Error::NotHomogeneous)
    }
}

/// `a(n)_Der(p) = phi_{r + d - k}(a o_n lift(p))`, computed by the vertex
/// engine on a lift of the degree-`r` polynomial `p`.
pub fn der_action(engine: &REngine, a: &RState, n: i64, p: &Poly, f: &FiltrationSpec) -> Result<Poly> {
    if n < 0 {
        return Err(Error::Precondition("Der actions are defined for n >= 0".into()));
    }
    let k = f.k.ok_or_else(|| Error::Precondition("filtration has no finite k".into()))?;
    let d = filtration_degree(a, f);
    if a.value.monomials().any(|m| m.degree() as i64 * f.scale as i64 != d) {
        return Err(Error::NotHomogeneous);
    }
    let r = homogeneous_degree(p)? * f.scale as i64;
    let image = engine.apply_mode(a, n, &lift(p, engine)?)?;
    let target = r + d - k;
    if target < 0 {
        return Ok(Poly::zero());
    }
    // drop everything below the target degree before projecting
    let top: Poly = Poly::from_terms(
        image.value.terms().filter(|(m, _)| m.degree() as i64 * f.scale as i64 == target).map(|(m, c)| (m.clone(), c.clone())),
    );
    if filtration_degree(&image, f) > target {
        return Err(Error::Consistency(format!("a(n) raised the filtration degree above {target}")));
    }
    phi(&image.with_value(top), target, f)
}

/// Per-variable images of `a(n)_Der`, the data of the derivation.
pub fn derivation_rules(
    engine: &REngine,
    a: &RState,
    n: i64,
    vars: &[VarId],
    f: &FiltrationSpec,
) -> Result<HashMap<VarId, Poly>> {
    vars.iter().map(|v| Ok((*v, der_action(engine, a, n, &Poly::var(*v), f)?))).collect()
}

/// All graded generators `beta_k`, `gamma_k` with `k <= max_level`.
pub fn gr_variables(dim: usize, max_level: u32) -> Vec<VarId> {
    let mut out = Vec::new();
    for i in 0..dim {
        for k in 0..=max_level {
            out.push(VarId::gr_beta(i, k));
            out.push(VarId::gr_gamma(i, k));
        }
    }
    out.sort();
    out
}

/// Applies a derivation given by its values on variables.
pub fn apply_rules(rules: &HashMap<VarId, Poly>, p: &Poly) -> Poly {
    apply_derivation(rules, p)
}

/// Product of monomials helper used by tests and the invariant ring.
pub fn monomial_poly(vars: &[VarId]) -> Poly {
    Poly::monomial(Monomial::from_vars(vars.iter().copied()))
}

/// One disagreement between the engine-derived action and a table.
#[derive(Clone, Debug)]
pub struct TableMismatch {
    pub op: TableOp,
    pub n: u32,
    pub var: VarId,
    pub engine: Poly,
    pub table: Poly,
}

/// Outcome of comparing a table with the engine on every generator of
/// level `<= max_level` and every mode `n <= max_n`.
#[derive(Clone, Debug)]
pub struct TableComparison {
    pub checked: usize,
    pub mismatches: Vec<TableMismatch>,
}

fn table_state(spec: &LieRepSpec, op: TableOp) -> Result<RState> {
    match op {
        TableOp::Theta(a) => build_theta(spec, a),
        TableOp::VX => Ok(build_sl2_triple(spec)?.0),
        TableOp::VY => Ok(build_sl2_triple(spec)?.1),
        TableOp::VH => Ok(build_sl2_triple(spec)?.2),
    }
}

pub fn compare_table(
    spec: &LieRepSpec,
    engine: &REngine,
    f: &FiltrationSpec,
    op: TableOp,
    max_level: u32,
    max_n: u32,
    printed: bool,
) -> Result<TableComparison> {
    let a = table_state(spec, op)?;
    let mut out = TableComparison { checked: 0, mismatches: Vec::new() };
    for v in gr_variables(spec.rep_dim(), max_level) {
        for n in 0..=max_n {
            let from_engine = der_action(engine, &a, n as i64, &Poly::var(v), f)?;
            let table = if printed { printed_table(spec, op, n, &v)? } else { corrected_table(spec, op, n, &v)? };
            out.checked += 1;
            if from_engine != table {
                out.mismatches.push(TableMismatch { op, n, var: v, engine: from_engine, table });
            }
        }
    }
    Ok(out)
}
