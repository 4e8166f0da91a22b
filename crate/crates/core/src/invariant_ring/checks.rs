use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::component::{enumerate_monomials, joint_kernel, Bound, ComponentSpec};
use crate::error::{Error, Result};
use crate::gr_bridge::{derivation_rules, FiltrationSpec};
use crate::scalar_poly::{apply_derivation, matrix_rank, Echelon, Monomial, Scalar, VarId};
use crate::structures::{build_sl2_triple, ghost_algebra, level_algebra, rho_hat, LieRepSpec, REngine, RState};
use crate::vertex_engine::{monomial_weight, var_weight, Engine, Generator};
use crate::{Poly, Rational};

/// The derivations `v^u(n)_Der`, `u = x, y, h`, `n <= max_mode`, on the
/// graded generators of level `<= truncation`, as computed by the engine.
pub struct LoopAction {
    pub truncation: u32,
    pub max_mode: u32,
    rules: Vec<Vec<HashMap<VarId, Poly>>>,
}

impl LoopAction {
    pub fn new(spec: &LieRepSpec, truncation: u32, max_mode: u32) -> Result<Self> {
        let engine = Engine::new(ghost_algebra(spec));
        let f = FiltrationSpec::new(&engine, 1)?;
        let (vx, vy, vh) = build_sl2_triple(spec)?;
        let vars = crate::gr_bridge::gr_variables(spec.rep_dim(), truncation);
        let rules = [vx, vy, vh]
            .iter()
            .map(|a| (0..=max_mode).map(|n| derivation_rules(&engine, a, n as i64, &vars, &f)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(LoopAction { truncation, max_mode, rules })
    }

    /// `v^u(n)_Der` with `u` in `0..3` for `x, y, h`.
    pub fn rules(&self, u: usize, n: u32) -> &HashMap<VarId, Poly> {
        &self.rules[u][n as usize]
    }

    pub fn apply(&self, u: usize, n: u32, p: &Poly) -> Poly {
        apply_derivation(self.rules(u, n), p)
    }

    /// Whether `p` is killed by every `v^u(n)` with `n <= max_n`.
    pub fn annihilates(&self, p: &Poly, max_n: u32) -> bool {
        (0..3).all(|u| (0..=max_n.min(self.max_mode)).all(|n| self.apply(u, n, p).is_zero()))
    }
}

/// Joint kernel of `v^u(n)_Der`, `n <= max_mode`, on a component.
pub fn invariant_kernel(action: &LoopAction, spec: &ComponentSpec, max_mode: u32, want_basis: bool) -> Result<super::JointKernel> {
    if spec.truncation > action.truncation || max_mode > action.max_mode {
        return Err(Error::Precondition("loop action computed on too small a truncation".into()));
    }
    let cols = enumerate_monomials(spec)?;
    joint_kernel(
        cols,
        &mut |m| {
            let p = Poly::monomial(m.clone());
            let mut imgs = Vec::new();
            for u in 0..3 {
                for n in 0..=max_mode {
                    if n <= m.vars().map(|v| v.level).max().unwrap_or(0) {
                        imgs.push(action.apply(u, n, &p));
                    } else {
                        imgs.push(Poly::zero());
                    }
                }
            }
            Ok(imgs)
        },
        want_basis,
    )
}

/// Kernel of arbitrary derivations (given by variable rules) on a closed
/// component.
pub fn derivation_kernel(ops: &[HashMap<VarId, Poly>], spec: &ComponentSpec) -> Result<Vec<Poly>> {
    if !spec.is_closed() {
        return Err(Error::Precondition("component must be given by upper bounds".into()));
    }
    let vars = spec.variables();
    for r in ops {
        for (v, img) in r {
            let ok = vars.contains(v)
                && img.monomials().all(|m| m.degree() == 1 && m.vars().all(|w| vars.contains(&w) && w.level <= v.level));
            if !ok {
                return Err(Error::Precondition(format!("operator leaves the component at {v}")));
            }
        }
    }
    let cols = enumerate_monomials(spec)?;
    let k = joint_kernel(cols, &mut |m| Ok(ops.iter().map(|r| apply_derivation(r, &Poly::monomial(m.clone()))).collect()), true)?;
    Ok(k.polynomials())
}

/// Number of multisets of `m` pairs `(u, k)` with `u` in three values,
/// `k <= n`, and `sum k = l`.
pub fn tau_monomial_count(l: u32, m: u32, n: u32) -> u64 {
    // dp over levels: ways[size][level]
    let mut ways = vec![vec![0u64; l as usize + 1]; m as usize + 1];
    ways[0][0] = 1;
    for k in 0..=n {
        for _u in 0..3 {
            // one more kind of item with level k, unbounded multiplicity
            for size in 1..=m as usize {
                for lev in k as usize..=l as usize {
                    ways[size][lev] += ways[size - 1][lev - k as usize];
                }
            }
        }
    }
    ways[m as usize][l as usize]
}

/// Result of a Jacobian rank test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Independence {
    Independent,
    Inconclusive,
}

/// Rank of the Jacobian of `polys` at the point `at`.
pub fn jacobian_rank(polys: &[Poly], at: &dyn Fn(&VarId) -> Rational) -> usize {
    let vars: Vec<VarId> = polys.iter().flat_map(|p| p.vars()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let m: Vec<Vec<Rational>> = polys.iter().map(|p| vars.iter().map(|v| p.partial(v).evaluate(at)).collect()).collect();
    matrix_rank(&m)
}

/// Certifies algebraic independence by a full-rank Jacobian at a seeded
/// random small-integer point, trying up to three points.
pub fn independence_witness(polys: &[Poly], seed: u64) -> Independence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3 {
        let mut values: HashMap<VarId, Rational> = HashMap::new();
        for v in polys.iter().flat_map(|p| p.vars()) {
            values.entry(v).or_insert_with(|| Rational::from_i64(rng.gen_range(-9..=9)));
        }
        if jacobian_rank(polys, &|v| values[v].clone()) == polys.len() {
            return Independence::Independent;
        }
    }
    Independence::Inconclusive
}

/// One component comparison of the invariant count against the count of
/// `tau` monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentRow {
    pub truncation: u32,
    pub level: u32,
    pub degree: u32,
    pub kernel_dim: usize,
    pub tau_dim: u64,
}

impl ComponentRow {
    pub fn pass(&self) -> bool {
        self.kernel_dim as u64 == self.tau_dim
    }
}

/// Kernel dimensions of the `sl(2)[t]` action against `tau` monomial counts
/// on every component of `P_N` with level `<= max_level`, degree `<= max_degree`.
pub fn verify_invariant_components(spec: &LieRepSpec, n: u32, max_level: u32, max_degree: u32) -> Result<Vec<ComponentRow>> {
    let action = LoopAction::new(spec, n, n)?;
    let mut rows = Vec::new();
    for l in 0..=max_level {
        for d in 0..=max_degree {
            let comp = ComponentSpec::new(spec.rep_dim(), n, Bound::Exact(l), Bound::Exact(d));
            let k = invariant_kernel(&action, &comp, n.min(l), false)?;
            let tau_dim = if d % 2 == 0 { tau_monomial_count(l, d / 2, n) } else { 0 };
            rows.push(ComponentRow { truncation: n, level: l, degree: d, kernel_dim: k.dim(), tau_dim });
        }
    }
    Ok(rows)
}

fn creation_vars(dim: usize, max_weight: i64, current: bool) -> Vec<VarId> {
    let mut out = Vec::new();
    for i in 0..dim {
        for k in 0..=max_weight as u32 {
            let cands: Vec<VarId> = if current { vec![VarId::current(i, k)] } else { vec![VarId::beta(i, k), VarId::gamma(i, k)] };
            out.extend(cands.into_iter().filter(|v| var_weight(v) <= max_weight));
        }
    }
    out.sort();
    out
}

/// Creation monomials of weight exactly `w` and degree `<= max_degree`.
pub fn weight_monomials(vars: &[VarId], w: i64, max_degree: u32) -> Vec<Monomial> {
    fn rec(vars: &[VarId], i: usize, w_left: i64, d_left: u32, cur: &mut Vec<(VarId, u32)>, out: &mut Vec<Monomial>) {
        if i == vars.len() {
            if w_left == 0 {
                out.push(Monomial::from_pairs(cur.iter().copied()));
            }
            return;
        }
        rec(vars, i + 1, w_left, d_left, cur, out);
        let wt = var_weight(&vars[i]);
        let mut e = 1;
        while e <= d_left && wt * e as i64 <= w_left {
            cur.push((vars[i], e));
            rec(vars, i + 1, w_left - wt * e as i64, d_left - e, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(vars, 0, w, max_degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// One weight of the commutant comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoweRow {
    pub weight: u32,
    pub component_dim: usize,
    pub kernel_dim: usize,
    pub pbw_count: usize,
    pub image_rank: usize,
}

/// For each weight `w <= max_weight`: the joint kernel of `v^u(n)`,
/// `n <= w + 1`, on the weight-`w`, degree `<= 2w` states of the ghost
/// system; the number of PBW monomials of weight `w` in `O(g, B)`; and the
/// rank of their images under the map to the ghost system.
pub fn howe_dims(spec: &LieRepSpec, max_weight: u32) -> Result<Vec<HoweRow>> {
    let engine = Engine::new(ghost_algebra(spec));
    let (vx, vy, vh) = build_sl2_triple(spec)?;
    let ops = [vx, vy, vh];
    let lambda = spec.level()?;
    let current_engine = Engine::new(level_algebra(spec, &lambda)?);
    let mut rows = Vec::new();
    for w in 0..=max_weight {
        let wi = w as i64;
        let cols = weight_monomials(&creation_vars(spec.rep_dim(), wi, false), wi, 2 * w);
        let dim = cols.len();
        let k = joint_kernel(
            cols,
            &mut |m| {
                let s = engine.state(Poly::monomial(m.clone()))?;
                let mut imgs = Vec::new();
                for a in &ops {
                    for n in 0..=wi + 1 {
                        imgs.push(engine.apply_mode(a, n, &s)?.value);
                    }
                }
                Ok(imgs)
            },
            false,
        )?;
        let pbw = weight_monomials(&creation_vars(spec.lie_dim(), wi, true), wi, u32::MAX);
        let image_rank = image_rank(spec, &engine, &current_engine, &pbw)?;
        rows.push(HoweRow { weight: w, component_dim: dim, kernel_dim: k.dim(), pbw_count: pbw.len(), image_rank });
    }
    Ok(rows)
}

fn image_rank(spec: &LieRepSpec, engine: &REngine, current: &REngine, pbw: &[Monomial]) -> Result<usize> {
    let images: Vec<RState> =
        pbw.iter().map(|m| rho_hat(spec, engine, &current.state(Poly::monomial(m.clone()))?)).collect::<Result<_>>()?;
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for s in &images {
        for m in s.value.monomials() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let mut e: Echelon<Rational> = Echelon::new(index.len());
    for s in &images {
        let mut row: Vec<(usize, Rational)> = s.value.terms().map(|(m, c)| (index[m], c.clone())).collect();
        row.sort_by_key(|(c, _)| *c);
        e.insert(&row);
    }
    Ok(e.rank())
}

/// Weight of a creation monomial; exposed for report formatting.
pub fn creation_weight(m: &Monomial) -> i64 {
    monomial_weight(m)
}

/// Dimension of the weight-0, degree `<= 2` invariants of `theta^u(0)` on
/// polynomials in `gamma(-1)`, the classical quadratic invariants of `V*`.
pub fn weight_zero_invariants(spec: &LieRepSpec) -> Result<usize> {
    let engine = Engine::new(ghost_algebra(spec));
    let thetas = crate::structures::build_thetas(spec)?;
    let vars: Vec<VarId> = (0..spec.rep_dim()).map(|i| VarId::gamma(i, 0)).collect();
    let mut cols = Vec::new();
    for d in 0..=2 {
        cols.extend(weight_monomials(&vars, 0, d).into_iter().filter(|m| m.degree() == d));
    }
    let k = joint_kernel(
        cols,
        &mut |m| {
            let s = engine.state(Poly::monomial(m.clone()))?;
            thetas.iter().map(|t| Ok(engine.apply_mode(t, 0, &s)?.value)).collect()
        },
        false,
    )?;
    let _ = Generator::Gamma(0);
    Ok(k.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant_ring::weyl::{tau, weyl_generators};
    use crate::structures::sl2_adjoint;

    fn series_coefficient(l: u32, m: u32, n: u32) -> u64 {
        // coefficient of t^m q^l in prod_{k<=n} (1 - t q^k)^-3 by repeated
        // multiplication with truncated geometric series
        let (lm, mm) = (l as usize, m as usize);
        let mut poly = vec![vec![0u64; lm + 1]; mm + 1];
        poly[0][0] = 1;
        for k in 0..=n as usize {
            for _ in 0..3 {
                let mut next = vec![vec![0u64; lm + 1]; mm + 1];
                for a in 0..=mm {
                    for bq in 0..=lm {
                        if poly[a][bq] == 0 {
                            continue;
                        }
                        let mut e = 0;
                        while a + e <= mm && bq + e * k <= lm {
                            next[a + e][bq + e * k] += poly[a][bq];
                            e += 1;
                            if k == 0 && a + e > mm {
                                break;
                            }
                        }
                    }
                }
                poly = next;
            }
        }
        poly[mm][lm]
    }

    #[test]
    fn counts_match_series() {
        assert_eq!(tau_monomial_count(0, 1, 1), 3);
        assert_eq!(tau_monomial_count(1, 2, 1), 9);
        assert_eq!(tau_monomial_count(5, 0, 1), 0);
        assert_eq!(tau_monomial_count(0, 0, 1), 1);
        for n in 0..3 {
            for l in 0..6 {
                for m in 0..5 {
                    assert_eq!(tau_monomial_count(l, m, n), series_coefficient(l, m, n), "l={l} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn jacobian_examples() {
        let taus: Vec<Poly> = (0..3).flat_map(|u| (0..=1).map(move |k| tau(u, k))).collect();
        assert_eq!(jacobian_rank(&taus, &|_| Rational::from_i64(1)), 6);
        assert_eq!(independence_witness(&taus, 0), Independence::Independent);
        let dep = vec![tau(2, 0), tau(2, 0).scale(&Rational::from_i64(2))];
        assert_eq!(independence_witness(&dep, 0), Independence::Inconclusive);
        let coords = vec![Poly::var(VarId::gr_beta(0, 0)), Poly::var(VarId::gr_gamma(0, 0))];
        assert_eq!(independence_witness(&coords, 5), Independence::Independent);
    }

    #[test]
    fn jacobian_by_finite_differences() {
        // the taus are affine in each variable, so unit differences are exact partials
        let taus: Vec<Poly> = (0..3).flat_map(|u| (0..=1).map(move |k| tau(u, k))).collect();
        let vars: Vec<VarId> = taus.iter().flat_map(|p| p.vars()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let one = |_: &VarId| Rational::from_i64(1);
        let m: Vec<Vec<Rational>> = taus
            .iter()
            .map(|p| {
                vars.iter()
                    .map(|v| {
                        let bumped = |w: &VarId| if w == v { Rational::from_i64(2) } else { Rational::from_i64(1) };
                        p.evaluate(&bumped) - p.evaluate(&one)
                    })
                    .collect()
            })
            .collect();
        assert_eq!(m.len(), 6);
        assert_eq!(m[0].len(), 12);
        assert_eq!(matrix_rank(&m), 6);
    }

    #[test]
    fn generators_are_invariant() {
        let action = LoopAction::new(&sl2_adjoint(), 2, 2).unwrap();
        for (v, p) in weyl_generators(2) {
            assert!((0..3).all(|u| action.apply(u, 0, &p).is_zero()), "{v}");
        }
        for u in 0..3 {
            for k in 0..=2 {
                assert!(action.annihilates(&tau(u, k), 2));
            }
        }
        // q^{1,1}_{0,1} is classical but not loop invariant
        assert!(!action.annihilates(&crate::invariant_ring::weyl::q_poly(1, 1, 0, 1), 1));
    }

    #[test]
    fn small_kernels() {
        let s = sl2_adjoint();
        let action = LoopAction::new(&s, 1, 1).unwrap();
        let comp = ComponentSpec::new(3, 1, Bound::Exact(0), Bound::Exact(2));
        let k = invariant_kernel(&action, &comp, 1, true).unwrap();
        assert_eq!(k.dim(), 3);
        let mut e: Echelon<Rational> = Echelon::new(k.columns.len());
        for v in &k.basis {
            e.insert(v);
        }
        let idx: BTreeMap<&Monomial, usize> = k.columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
        for u in 0..3 {
            let mut row: Vec<(usize, Rational)> = tau(u, 0).terms().map(|(m, c)| (idx[m], c.clone())).collect();
            row.sort_by_key(|(c, _)| *c);
            assert!(e.contains(&row));
        }
        let odd = ComponentSpec::new(3, 1, Bound::Exact(0), Bound::Exact(1));
        assert_eq!(invariant_kernel(&action, &odd, 1, false).unwrap().dim(), 0);
    }

    #[test]
    fn mode_cutoff_is_irrelevant() {
        let s = sl2_adjoint();
        let action = LoopAction::new(&s, 2, 4).unwrap();
        let comp = ComponentSpec::new(3, 2, Bound::Exact(2), Bound::Exact(4));
        let dims: Vec<usize> = (2..=4).map(|n| invariant_kernel(&action, &comp, n, false).unwrap().dim()).collect();
        assert!(dims.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn trivial_operator_list_keeps_everything() {
        let comp = ComponentSpec::new(3, 1, Bound::AtMost(1), Bound::AtMost(2));
        let all = enumerate_monomials(&comp).unwrap().len();
        assert_eq!(derivation_kernel(&[], &comp).unwrap().len(), all);
    }

    #[test]
    fn invariant_components_small() {
        let rows = verify_invariant_components(&sl2_adjoint(), 1, 1, 4).unwrap();
        assert!(rows.iter().all(ComponentRow::pass), "{rows:?}");
        let r = rows.iter().find(|r| r.level == 0 && r.degree == 2).unwrap();
        assert_eq!((r.kernel_dim, r.tau_dim), (3, 3));
    }

    #[test]
    fn casimir() {
        assert_eq!(weight_zero_invariants(&sl2_adjoint()).unwrap(), 2);
    }

    #[test]
    fn howe_low_weights() {
        let rows = howe_dims(&sl2_adjoint(), 2).unwrap();
        let dims: Vec<usize> = rows.iter().map(|r| r.kernel_dim).collect();
        assert_eq!(dims, vec![1, 3, 9]);
        assert!(rows.iter().all(|r| r.pbw_count == r.kernel_dim && r.image_rank == r.pbw_count));
    }
}
