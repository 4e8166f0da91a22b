use std::collections::BTreeMap;

use num_traits::Zero;

use super::component::joint_kernel;
use crate::error::Result;
use crate::scalar_poly::{apply_derivation, Echelon, Monomial, Scalar, VarId};
use crate::vertex_engine::binom;
use crate::{Poly, Rational};

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn bg(c: i64, b: VarId, g: VarId) -> Poly {
    Poly::term(Monomial::from_vars([b, g]), q(c))
}

const X: usize = 0;
const Y: usize = 1;
const H: usize = 2;

fn b(u: usize, k: u32) -> VarId {
    VarId::gr_beta(u, k)
}

fn g(u: usize, k: u32) -> VarId {
    VarId::gr_gamma(u, k)
}

/// The invariant `q^{a,b}_{i,j}` pairing `W^a_i` with `W^b_j`.
///
/// The three diagonal families are the usual determinants; the mixed
/// families carry the overall sign that makes `tau^u_0 = q_{0,0}`.
pub fn q_poly(a: u16, bb: u16, i: u32, j: u32) -> Poly {
    match (a, bb) {
        (1, 1) => bg(2, b(X, i), g(Y, j)) + bg(-2, b(X, j), g(Y, i)),
        (2, 2) => bg(2, b(Y, i), g(X, j)) + bg(-2, b(Y, j), g(X, i)),
        (3, 3) => bg(1, b(H, i), g(H, j)) + bg(-1, b(H, j), g(H, i)),
        (1, 2) => bg(-2, b(X, i), g(X, j)) + bg(2, b(Y, j), g(Y, i)),
        (1, 3) => bg(2, b(X, i), g(H, j)) + bg(-1, b(H, j), g(Y, i)),
        (2, 3) => bg(-2, b(Y, i), g(H, j)) + bg(1, b(H, j), g(X, i)),
        _ => panic!("no invariant for the module pair ({a}, {bb})"),
    }
}

/// All `q^{a,b}_{i,j}` with indices `<= n`: `i < j` on the diagonal
/// families, every `(i, j)` on the mixed ones.
pub fn weyl_generators(n: u32) -> Vec<(VarId, Poly)> {
    let mut out = Vec::new();
    for (a, bb) in [(1, 1), (2, 2), (3, 3), (1, 2), (1, 3), (2, 3)] {
        for i in 0..=n {
            for j in 0..=n {
                if a == bb && i >= j {
                    continue;
                }
                out.push((VarId::gr_q(a, bb, i, j), q_poly(a, bb, i, j)));
            }
        }
    }
    out
}

/// `tau^u_0` for `u = x, y, h` (indices 0, 1, 2).
pub fn tau0(u: usize) -> Poly {
    match u {
        X => bg(2, b(X, 0), g(H, 0)) + bg(-1, b(H, 0), g(Y, 0)),
        Y => bg(-2, b(Y, 0), g(H, 0)) + bg(1, b(H, 0), g(X, 0)),
        _ => bg(-2, b(X, 0), g(X, 0)) + bg(2, b(Y, 0), g(Y, 0)),
    }
}

/// `tau^u_k = d^k tau^u_0`.
pub fn tau(u: usize, k: u32) -> Poly {
    let mut p = tau0(u);
    for _ in 0..k {
        p = crate::gr_bridge::gr_derivative(&p);
    }
    p
}

/// The mixed family whose binomial sums give `tau^u`.
pub fn tau_family(u: usize) -> (u16, u16) {
    match u {
        X => (1, 3),
        Y => (2, 3),
        _ => (1, 2),
    }
}

/// `sum_i binom(k, i) q_{i, k-i}` over the family of `u`.
pub fn tau_from_q(u: usize, k: u32) -> Poly {
    let (a, bb) = tau_family(u);
    let mut p = Poly::zero();
    for i in 0..=k {
        p.add_scaled(&q_poly(a, bb, i, k - i), &binom::<Rational>(k as i64, i as i64));
    }
    p
}

/// The module `W^a_n` as `(a, n)`.
pub type Module = (u16, u32);

/// Sign and scale relating `q^{a,b}` to the determinant in a fixed
/// normalization of the modules.
fn kappa(a: u16, bb: u16) -> Rational {
    match (a, bb) {
        (1, 1) | (2, 2) => q(4),
        (3, 3) => q(1),
        (1, 2) => q(-4),
        (1, 3) => q(2),
        _ => q(-2),
    }
}

/// The invariant pairing two distinct modules, with `m1 < m2`.
pub fn pair_q(m1: Module, m2: Module) -> (VarId, Poly) {
    let ((a, i), (bb, j)) = (m1, m2);
    (VarId::gr_q(a, bb, i, j), q_poly(a, bb, i, j))
}

/// A quadratic relation among the `q`'s for four distinct modules, written
/// as terms `(coefficient, first q, second q)` normalized so that the first
/// coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerRelation {
    pub modules: [Module; 4],
    pub terms: Vec<(Rational, VarId, VarId)>,
}

impl PluckerRelation {
    /// The relation evaluated in `P`.
    pub fn in_p(&self) -> Poly {
        let mut out = Poly::zero();
        for (c, v1, v2) in &self.terms {
            out.add_scaled(&(&q_of(v1) * &q_of(v2)), c);
        }
        out
    }
}

/// `q^{a,b}_{i,j}` for a `GrQ` variable.
pub fn q_of(v: &VarId) -> Poly {
    let (a, bb) = v.q_pair();
    q_poly(a, bb, v.level, v.extra)
}

fn relation_for(mods: [Module; 4]) -> PluckerRelation {
    let [a, b2, c, d] = mods;
    let raw = [(q(1), a, b2, c, d), (q(-1), a, c, b2, d), (q(1), a, d, b2, c)];
    let mut terms: Vec<(Rational, VarId, VarId)> = raw
        .iter()
        .map(|(s, m1, m2, m3, m4)| {
            let c1 = kappa(m1.0, m2.0);
            let c2 = kappa(m3.0, m4.0);
            (s / (c1 * c2), pair_q(*m1, *m2).0, pair_q(*m3, *m4).0)
        })
        .collect();
    let lead = terms[0].0.clone();
    for t in terms.iter_mut() {
        t.0 = &t.0 / &lead;
    }
    PluckerRelation { modules: mods, terms }
}

/// All modules `W^a_n` with `n <= max_n`, in `(a, n)` order.
pub fn modules(max_n: u32) -> Vec<Module> {
    let mut out: Vec<Module> = (1..=3).flat_map(|a| (0..=max_n).map(move |n| (a, n))).collect();
    out.sort();
    out
}

/// One relation per choice of four distinct modules from `mods`.
pub fn plucker_relations_for(mods: &[Module]) -> Vec<PluckerRelation> {
    let mut sorted = mods.to_vec();
    sorted.sort();
    sorted.dedup();
    let n = sorted.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    out.push(relation_for([sorted[i], sorted[j], sorted[k], sorted[l]]));
                }
            }
        }
    }
    out
}

pub fn plucker_relations(max_n: u32) -> Vec<PluckerRelation> {
    plucker_relations_for(&modules(max_n))
}

/// Outcome of the brute-force comparison for one total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylRow {
    pub copies: usize,
    pub degree: u32,
    pub invariant_dim: usize,
    pub q_span_dim: usize,
    pub q_monomials: usize,
}

fn sym_vars(copies: usize) -> Vec<VarId> {
    (0..2 * copies).map(VarId::free).collect()
}

fn standard_rules(copies: usize) -> [std::collections::HashMap<VarId, Poly>; 3] {
    let mut x = std::collections::HashMap::new();
    let mut y = std::collections::HashMap::new();
    let mut h = std::collections::HashMap::new();
    for n in 0..copies {
        let (a1, a2) = (VarId::free(2 * n), VarId::free(2 * n + 1));
        x.insert(a2, Poly::var(a1));
        y.insert(a1, Poly::var(a2));
        h.insert(a1, Poly::var(a1));
        h.insert(a2, -Poly::var(a2));
    }
    [x, y, h]
}

fn degree_monomials(vars: &[VarId], d: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &out {
            let top = m.greatest();
            for v in vars {
                if top.is_none_or(|t| *v >= t) {
                    next.push(m.mul_var(*v));
                }
            }
        }
        out = next;
    }
    out
}

/// The determinant `q_{ij}` on copies `i < j` of the standard module.
pub fn standard_q(i: usize, j: usize) -> Poly {
    let m = |a: usize, b2: usize| Poly::monomial(Monomial::from_vars([VarId::free(a), VarId::free(b2)]));
    m(2 * i, 2 * j + 1) - m(2 * j, 2 * i + 1)
}

/// Brute-force `sl(2)` invariants of `Sym(W_0 + ... + W_{copies-1})` in each
/// degree against the span of monomials in the determinants.
pub fn verify_weyl(copies: usize, max_degree: u32) -> Result<Vec<WeylRow>> {
    let vars = sym_vars(copies);
    let rules = standard_rules(copies);
    let qs: Vec<Poly> = (0..copies).flat_map(|i| (i + 1..copies).map(move |j| standard_q(i, j))).collect();
    let mut rows = Vec::new();
    for d in 0..=max_degree {
        let cols = degree_monomials(&vars, d);
        let index: BTreeMap<Monomial, usize> = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let k = joint_kernel(
            cols,
            &mut |m| Ok(rules.iter().map(|r| apply_derivation(r, &Poly::monomial(m.clone()))).collect()),
            false,
        )?;
        let (span, count) = if d % 2 == 0 {
            let mut e: Echelon<Rational> = Echelon::new(index.len());
            let mut count = 0;
            for combo in degree_monomials(&(0..qs.len()).map(VarId::free).collect::<Vec<_>>(), d / 2) {
                count += 1;
                let mut p = Poly::one();
                for v in combo.expanded() {
                    p = &p * &qs[v.index as usize];
                }
                let row: Vec<(usize, Rational)> = p.terms().map(|(m, c)| (index[m], c.clone())).collect();
                let mut row = row;
                row.sort_by_key(|(c, _)| *c);
                e.insert(&row);
            }
            (e.rank(), count)
        } else {
            (0, 0)
        };
        rows.push(WeylRow { copies, degree: d, invariant_dim: k.dim(), q_span_dim: span, q_monomials: count });
    }
    Ok(rows)
}

/// Exponent vector of an `epsilon` monomial with parameters
/// `i_1..i_r`, `j_1..j_s`, `k_1..k_t`.
pub fn epsilon(is: &[u32], js: &[u32], ks: &[u32]) -> Monomial {
    let mut vars = Vec::new();
    for &i in is {
        vars.extend([b(X, 0), g(H, i)]);
    }
    for &j in js {
        vars.extend([b(X, 0), g(X, j)]);
    }
    for &k in ks {
        vars.extend([b(Y, k), g(H, 0)]);
    }
    Monomial::from_vars(vars)
}

fn multisets<T: Clone + Ord>(items: &[T], size: usize) -> Vec<Vec<T>> {
    if size == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, it) in items.iter().enumerate() {
        for mut rest in multisets(&items[i..], size - 1) {
            rest.insert(0, it.clone());
            out.push(rest);
        }
    }
    out
}

/// Monomials in the mixed `q`'s (resp. the `tau`'s) of matching shape whose
/// expansion contains `epsilon`, together with the predicted list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonSupport {
    pub candidates: usize,
    pub actual: Vec<Vec<VarId>>,
    pub predicted: Vec<Vec<VarId>>,
}

impl EpsilonSupport {
    pub fn holds(&self) -> bool {
        self.actual.iter().all(|m| self.predicted.contains(m)) && (self.predicted.is_empty() || !self.actual.is_empty())
    }
}

fn contains_eps(factors: &[Poly], eps: &Monomial) -> bool {
    let mut p = Poly::one();
    for f in factors {
        p = &p * f;
    }
    !p.coeff(eps).is_zero()
}

fn permutations_distinct(v: &[u32]) -> Vec<Vec<u32>> {
    if v.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for i in 0..v.len() {
        if !seen.insert(v[i]) {
            continue;
        }
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations_distinct(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// The support of `epsilon` among monomials in `q^{1,2}`, `q^{1,3}`, `q^{2,3}`
/// with indices `<= max_index`.
pub fn epsilon_support_q(is: &[u32], js: &[u32], ks: &[u32], max_index: u32) -> EpsilonSupport {
    let eps = epsilon(is, js, ks);
    let (r, s, t) = (is.len(), js.len(), ks.len());
    let total_level: u32 = is.iter().chain(js).chain(ks).sum();
    let pairs: Vec<(u32, u32)> = (0..=max_index).flat_map(|i| (0..=max_index).map(move |j| (i, j))).collect();
    let mut actual = Vec::new();
    let mut candidates = 0;
    for m12 in multisets(&pairs, s) {
        for m13 in multisets(&pairs, r) {
            for m23 in multisets(&pairs, t) {
                let lev: u32 = m12.iter().chain(&m13).chain(&m23).map(|(i, j)| i + j).sum();
                if lev != total_level {
                    continue;
                }
                candidates += 1;
                let mut vars = Vec::new();
                let mut polys = Vec::new();
                for (fam, list) in [((1, 2), &m12), ((1, 3), &m13), ((2, 3), &m23)] {
                    for &(i, j) in list.iter() {
                        vars.push(VarId::gr_q(fam.0, fam.1, i, j));
                        polys.push(q_poly(fam.0, fam.1, i, j));
                    }
                }
                if contains_eps(&polys, &eps) {
                    vars.sort();
                    actual.push(vars);
                }
            }
        }
    }
    let mut base: Vec<u32> = is.to_vec();
    base.extend(std::iter::repeat_n(0, t));
    let mut predicted = Vec::new();
    for perm in permutations_distinct(&base) {
        let mut vars: Vec<VarId> = perm[..r].iter().map(|&i| VarId::gr_q(1, 3, 0, i)).collect();
        vars.extend(js.iter().map(|&j| VarId::gr_q(1, 2, 0, j)));
        vars.extend(ks.iter().zip(&perm[r..]).map(|(&k, &i)| VarId::gr_q(2, 3, k, i)));
        vars.sort();
        if !predicted.contains(&vars) {
            predicted.push(vars);
        }
    }
    actual.sort();
    predicted.sort();
    EpsilonSupport { candidates, actual, predicted }
}

fn pairings(is: &[u32], ks: &[u32]) -> Vec<(Vec<u32>, Vec<u32>)> {
    // replace some pairs (i_a, k_b) by (0, i_a + k_b), each index used once
    let Some((&first, rest)) = is.split_first() else { return vec![(vec![], ks.to_vec())] };
    let mut out = Vec::new();
    for (ri, rk) in pairings(rest, ks) {
        let mut a = ri.clone();
        a.insert(0, first);
        out.push((a, rk.clone()));
    }
    for b2 in 0..ks.len() {
        let mut remaining = ks.to_vec();
        let k = remaining.remove(b2);
        for (ri, mut rk) in pairings(rest, &remaining) {
            let mut a = ri;
            a.insert(0, 0);
            rk.push(first + k);
            out.push((a, rk));
        }
    }
    out
}

/// The support of `epsilon` among monomials in the `tau^u_k`, `k <= max_index`.
pub fn epsilon_support_tau(is: &[u32], js: &[u32], ks: &[u32], max_index: u32) -> EpsilonSupport {
    let eps = epsilon(is, js, ks);
    let size = is.len() + js.len() + ks.len();
    let total_level: u32 = is.iter().chain(js).chain(ks).sum();
    let taus: Vec<(usize, u32)> = (0..3).flat_map(|u| (0..=max_index).map(move |k| (u, k))).collect();
    let mut actual = Vec::new();
    let mut candidates = 0;
    for combo in multisets(&taus, size) {
        if combo.iter().map(|(_, k)| k).sum::<u32>() != total_level {
            continue;
        }
        candidates += 1;
        let polys: Vec<Poly> = combo.iter().map(|&(u, k)| tau(u, k)).collect();
        if contains_eps(&polys, &eps) {
            let mut vars: Vec<VarId> = combo.iter().map(|&(u, k)| VarId::gr_t(u, k)).collect();
            vars.sort();
            actual.push(vars);
        }
    }
    let mut predicted = Vec::new();
    for (ip, kp) in pairings(is, ks) {
        let mut vars: Vec<VarId> = ip.iter().map(|&i| VarId::gr_t(X, i)).collect();
        vars.extend(js.iter().map(|&j| VarId::gr_t(H, j)));
        vars.extend(kp.iter().map(|&k| VarId::gr_t(Y, k)));
        vars.sort();
        if !predicted.contains(&vars) && vars.iter().all(|v| v.level <= max_index) {
            predicted.push(vars);
        }
    }
    actual.sort();
    predicted.sort();
    EpsilonSupport { candidates, actual, predicted }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_poly::Family;

    #[test]
    fn printed_examples() {
        let q11 = q_poly(1, 1, 0, 1);
        assert_eq!(q11.to_string(), "2*b[1,0]*g[2',1] - 2*b[1,1]*g[2',0]");
        assert_eq!(q_poly(3, 3, 0, 1), bg(1, b(H, 0), g(H, 1)) + bg(-1, b(H, 1), g(H, 0)));
    }

    #[test]
    fn taus_from_q() {
        for u in 0..3 {
            for k in 0..=4 {
                assert_eq!(tau(u, k), tau_from_q(u, k), "u={u} k={k}");
            }
        }
        let t2 = q_poly(1, 2, 0, 2) + q_poly(1, 2, 1, 1).scale(&q(2)) + q_poly(1, 2, 2, 0);
        assert_eq!(tau(H, 2), t2);
    }

    #[test]
    fn relations_vanish() {
        let rels = plucker_relations(1);
        assert_eq!(rels.len(), 15);
        for r in &rels {
            assert!(r.in_p().is_zero(), "{:?}", r.modules);
        }
        assert!(plucker_relations_for(&[(1, 0), (2, 0), (3, 0)]).is_empty());
        for r in plucker_relations(2) {
            assert!(r.in_p().is_zero(), "{:?}", r.modules);
        }
    }

    #[test]
    fn single_relation_shape() {
        // q33_ij q12_00 - q13_0i q23_0j + q13_0j q23_0i for (i, j) = (1, 2)
        let rels = plucker_relations(2);
        let r = rels.iter().find(|r| r.modules == [(1, 0), (2, 0), (3, 1), (3, 2)]).unwrap();
        let want = vec![
            (q(1), VarId::gr_q(1, 2, 0, 0), VarId::gr_q(3, 3, 1, 2)),
            (q(-1), VarId::gr_q(1, 3, 0, 1), VarId::gr_q(2, 3, 0, 2)),
            (q(1), VarId::gr_q(1, 3, 0, 2), VarId::gr_q(2, 3, 0, 1)),
        ];
        assert_eq!(r.terms, want);
    }

    #[test]
    fn generator_count() {
        let g = weyl_generators(1);
        // three diagonal families with one pair each, three mixed with four
        assert_eq!(g.len(), 3 + 12);
        assert!(g.iter().all(|(v, _)| v.family == Family::GrQ));
    }

    #[test]
    fn weyl_small_cases() {
        let rows = verify_weyl(2, 2).unwrap();
        assert_eq!((rows[2].invariant_dim, rows[2].q_span_dim), (1, 1));
        let rows = verify_weyl(3, 2).unwrap();
        assert_eq!((rows[2].invariant_dim, rows[2].q_span_dim), (3, 3));
        assert_eq!(rows[1].invariant_dim, 0);
    }

    #[test]
    fn epsilon_examples() {
        let s = epsilon_support_q(&[1], &[], &[1], 2);
        assert!(s.holds(), "{s:?}");
        assert!(s.candidates > 0);
        let v = epsilon_support_q(&[], &[], &[], 2);
        assert!(v.holds());
        let t = epsilon_support_tau(&[], &[1], &[], 2);
        assert!(t.holds());
        assert_eq!(t.actual, vec![vec![VarId::gr_t(H, 1)]]);
        let t = epsilon_support_tau(&[1], &[], &[1], 2);
        assert!(t.holds(), "{t:?}");
    }
}
