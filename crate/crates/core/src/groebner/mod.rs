//! Monomial orders, multivariate division and Buchberger's algorithm.

mod ideal;

pub use ideal::{
    build_truncated_ideal, eliminate_q, f_universe, ft_monomials, relation_q23, relation_q33, phi, phi_var,
    relation_in_f, verify_leading_terms, GrobnerContext, ORDER_REVISION,
};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar_poly::{Family, Monomial, VarId};
use crate::{Poly, Rational};

/// A total order on variables, extended lexicographically to monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Plain lex with the listed variables, greatest first.
    Lex(Vec<VarId>),
    /// `Q^{3,3} > Q^{2,3} > Q^{2,2} > Q^{1,3} > Q^{1,2} > Q^{1,1} > T^y > T^x > T^h`;
    /// within a `Q` family by the second index and then the first, within a
    /// `T` family by level.
    Ranked,
}

impl MonomialOrder {
    pub fn lex(vars: &[VarId]) -> Self {
        MonomialOrder::Lex(vars.to_vec())
    }

    /// Rank of a variable; larger is greater.
    pub fn rank(&self, v: &VarId) -> Result<u64> {
        match self {
            MonomialOrder::Lex(vars) => vars
                .iter()
                .position(|w| w == v)
                .map(|p| (vars.len() - p) as u64)
                .ok_or_else(|| Error::Precondition(format!("{v} is not ordered"))),
            MonomialOrder::Ranked => {
                let family = match (v.family, v.index) {
                    (Family::GrQ, 33) => 8,
                    (Family::GrQ, 23) => 7,
                    (Family::GrQ, 22) => 6,
                    (Family::GrQ, 13) => 5,
                    (Family::GrQ, 12) => 4,
                    (Family::GrQ, 11) => 3,
                    (Family::GrT, 1) => 2,
                    (Family::GrT, 0) => 1,
                    (Family::GrT, 2) => 0,
                    _ => return Err(Error::Precondition(format!("{v} is not ordered"))),
                };
                let inner = if v.family == Family::GrQ { ((v.extra as u64) << 20) | v.level as u64 } else { v.level as u64 };
                Ok((family << 48) | inner)
            }
        }
    }

    pub fn cmp_vars(&self, a: &VarId, b: &VarId) -> Result<Ordering> {
        Ok(self.rank(a)?.cmp(&self.rank(b)?))
    }

    /// Compares exponent sequences in order of descending variable rank.
    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        let seq = |m: &Monomial| -> Result<Vec<(u64, u32)>> {
            let mut s: Vec<(u64, u32)> = m.factors().iter().map(|(v, e)| Ok((self.rank(v)?, *e))).collect::<Result<_>>()?;
            s.sort_unstable_by_key(|x| std::cmp::Reverse(x.0));
            Ok(s)
        };
        let (sa, sb) = (seq(a)?, seq(b)?);
        for i in 0.. {
            match (sa.get(i), sb.get(i)) {
                (None, None) => return Ok(Ordering::Equal),
                (Some(_), None) => return Ok(Ordering::Greater),
                (None, Some(_)) => return Ok(Ordering::Less),
                (Some(x), Some(y)) => {
                    if x.0 != y.0 {
                        return Ok(x.0.cmp(&y.0));
                    }
                    if x.1 != y.1 {
                        return Ok(x.1.cmp(&y.1));
                    }
                }
            }
        }
        unreachable!()
    }
}

/// Polynomials over a fixed list of variables, with exponent vectors stored
/// greatest variable first so that lex order is slice order.
struct Ring {
    vars: Vec<VarId>,
    index: HashMap<VarId, usize>,
}

type Exps = Vec<u16>;
type IPoly = BTreeMap<Exps, Rational>;

impl Ring {
    fn new<'a>(order: &MonomialOrder, polys: impl IntoIterator<Item = &'a Poly>) -> Result<Self> {
        let mut vars: Vec<VarId> = polys.into_iter().flat_map(|p| p.vars()).collect();
        vars.sort();
        vars.dedup();
        let mut keyed: Vec<(u64, VarId)> = vars.into_iter().map(|v| Ok((order.rank(&v)?, v))).collect::<Result<_>>()?;
        keyed.sort_by_key(|x| std::cmp::Reverse(x.0));
        let vars: Vec<VarId> = keyed.into_iter().map(|(_, v)| v).collect();
        let index = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        Ok(Ring { vars, index })
    }

    fn to_exps(&self, m: &Monomial) -> Exps {
        let mut e = vec![0u16; self.vars.len()];
        for (v, k) in m.factors() {
            e[self.index[v]] = *k as u16;
        }
        e
    }

    fn to_monomial(&self, e: &[u16]) -> Monomial {
        Monomial::from_pairs(e.iter().enumerate().filter(|(_, k)| **k > 0).map(|(i, k)| (self.vars[i], *k as u32)))
    }

    fn import(&self, p: &Poly) -> IPoly {
        p.terms().map(|(m, c)| (self.to_exps(m), c.clone())).collect()
    }

    fn export(&self, p: &IPoly) -> Poly {
        Poly::from_terms(p.iter().map(|(e, c)| (self.to_monomial(e), c.clone())))
    }
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn sub_exps(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_exps(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn total(a: &[u16]) -> u32 {
    a.iter().map(|x| *x as u32).sum()
}

fn lead(p: &IPoly) -> (&Exps, &Rational) {
    p.iter().next_back().expect("nonzero")
}

/// `p += c * x^shift * q`.
fn add_mul(p: &mut IPoly, q: &IPoly, c: &Rational, shift: &[u16]) {
    for (e, x) in q {
        let key = add_exps(e, shift);
        let v = x * c;
        match p.get_mut(&key) {
            Some(y) => {
                *y += v;
                if y.is_zero() {
                    p.remove(&key);
                }
            }
            None => {
                p.insert(key, v);
            }
        }
    }
}

fn monic(p: &IPoly) -> IPoly {
    let c = lead(p).1.clone();
    p.iter().map(|(e, x)| (e.clone(), x / &c)).collect()
}

/// Full reduction of `f` by `basis`, returning quotients and remainder.
fn reduce(f: &IPoly, basis: &[IPoly], quotients: Option<&mut Vec<IPoly>>) -> IPoly {
    let mut f = f.clone();
    let mut rem = IPoly::new();
    let mut quotients = quotients;
    while let Some((e, c)) = f.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        match basis.iter().position(|g| divides(lead(g).0, &e)) {
            Some(k) => {
                let (ge, gc) = lead(&basis[k]);
                let shift = sub_exps(&e, ge);
                let q = &c / gc;
                add_mul(&mut f, &basis[k], &-q.clone(), &shift);
                if let Some(qs) = quotients.as_deref_mut() {
                    let mut mono = IPoly::new();
                    mono.insert(shift, q);
                    let acc = &mut qs[k];
                    add_mul(acc, &mono, &Rational::one(), &vec![0; e.len()]);
                }
            }
            None => {
                f.remove(&e);
                rem.insert(e, c);
            }
        }
    }
    rem
}

fn s_poly(f: &IPoly, g: &IPoly) -> IPoly {
    let (fe, fc) = lead(f);
    let (ge, gc) = lead(g);
    let l = lcm(fe, ge);
    let mut out = IPoly::new();
    add_mul(&mut out, f, &(Rational::one() / fc), &sub_exps(&l, fe));
    add_mul(&mut out, g, &-(Rational::one() / gc), &sub_exps(&l, ge));
    out
}

/// Leading monomial and coefficient of a nonzero polynomial.
pub fn leading_term(f: &Poly, order: &MonomialOrder) -> Result<(Monomial, Rational)> {
    let mut best: Option<(&Monomial, &Rational)> = None;
    for (m, c) in f.terms() {
        best = match best {
            Some(b) if order.cmp_monomials(m, b.0)? != Ordering::Greater => Some(b),
            _ => Some((m, c)),
        };
    }
    best.map(|(m, c)| (m.clone(), c.clone())).ok_or(Error::ZeroPolynomial)
}

pub fn s_polynomial(f: &Poly, g: &Poly, order: &MonomialOrder) -> Result<Poly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ring = Ring::new(order, [f, g])?;
    Ok(ring.export(&s_poly(&ring.import(f), &ring.import(g))))
}

/// Result of dividing by a list of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub remainder: Poly,
    /// `f = sum quotients[i] * basis[i] + remainder`.
    pub quotients: Vec<Poly>,
    /// Whether the divisors are known to form a Groebner basis, making the
    /// remainder independent of the division order.
    pub canonical: bool,
}

/// Multivariate division of `f` by `basis`, always dividing by the first
/// divisor whose leading term divides.
pub fn normal_form(f: &Poly, basis: &[Poly], order: &MonomialOrder) -> Result<NormalForm> {
    let ring = Ring::new(order, basis.iter().chain([f]))?;
    let ib: Vec<IPoly> = basis.iter().filter(|g| !g.is_zero()).map(|g| ring.import(g)).collect();
    if ib.len() != basis.len() {
        return Err(Error::ZeroPolynomial);
    }
    let mut qs = vec![IPoly::new(); ib.len()];
    let r = reduce(&ring.import(f), &ib, Some(&mut qs));
    Ok(NormalForm { remainder: ring.export(&r), quotients: qs.iter().map(|q| ring.export(q)).collect(), canonical: false })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuchbergerOptions {
    /// Skip pairs whose leading terms are coprime.
    pub coprime_criterion: bool,
    /// Skip `(i, j)` when some `k` has `lt(k) | lcm(i, j)` and both `(i, k)`
    /// and `(j, k)` are already treated.
    pub chain_criterion: bool,
    /// Interreduce and make monic at the end.
    pub reduce: bool,
}

impl Default for BuchbergerOptions {
    fn default() -> Self {
        BuchbergerOptions { coprime_criterion: true, chain_criterion: false, reduce: true }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuchbergerStats {
    pub pairs_total: usize,
    pub pairs_skipped: usize,
    pub zero_reductions: usize,
    pub added: usize,
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub order: MonomialOrder,
    pub polys: Vec<Poly>,
    pub stats: BuchbergerStats,
}

/// Buchberger's algorithm with the normal pair selection: the pair with
/// the smallest lcm (by total degree, then by the order) first, ties by
/// creation.
pub fn buchberger(gens: &[Poly], order: &MonomialOrder, opts: BuchbergerOptions) -> Result<GroebnerBasis> {
    let ring = Ring::new(order, gens)?;
    let mut g: Vec<IPoly> = Vec::new();
    for p in gens.iter().filter(|p| !p.is_zero()) {
        let ip = monic(&ring.import(p));
        if !g.contains(&ip) {
            g.push(ip);
        }
    }
    let mut stats = BuchbergerStats::default();
    let mut pending: Vec<(usize, usize)> = (0..g.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut done: std::collections::HashSet<(usize, usize)> = Default::default();
    stats.pairs_total = pending.len();
    while !pending.is_empty() {
        let key = |&(i, j): &(usize, usize)| {
            let l = lcm(lead(&g[i]).0, lead(&g[j]).0);
            (total(&l), l, j, i)
        };
        let best = (0..pending.len()).min_by_key(|&k| key(&pending[k])).expect("nonempty");
        let (i, j) = pending.swap_remove(best);
        done.insert((i, j));
        let (li, lj) = (lead(&g[i]).0.clone(), lead(&g[j]).0.clone());
        if opts.coprime_criterion && li.iter().zip(&lj).all(|(a, b)| *a == 0 || *b == 0) {
            stats.pairs_skipped += 1;
            continue;
        }
        if opts.chain_criterion {
            let l = lcm(&li, &lj);
            let treated = |a: usize, b: usize| done.contains(&(a.min(b), a.max(b)));
            if (0..g.len()).any(|k| k != i && k != j && divides(lead(&g[k]).0, &l) && treated(i, k) && treated(j, k)) {
                stats.pairs_skipped += 1;
                continue;
            }
        }
        let r = reduce(&s_poly(&g[i], &g[j]), &g, None);
        if r.is_empty() {
            stats.zero_reductions += 1;
            continue;
        }
        let n = g.len();
        g.push(monic(&r));
        stats.added += 1;
        for k in 0..n {
            pending.push((k, n));
        }
        stats.pairs_total += n;
    }
    if opts.reduce {
        g = interreduce(g);
    }
    let polys = g.iter().map(|p| ring.export(p)).collect();
    Ok(GroebnerBasis { order: order.clone(), polys, stats })
}

fn interreduce(mut g: Vec<IPoly>) -> Vec<IPoly> {
    g.sort_by(|a, b| lead(a).0.cmp(lead(b).0));
    let mut minimal: Vec<IPoly> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| divides(lead(q).0, lead(&p).0)) {
            minimal.retain(|q| !divides(lead(&p).0, lead(q).0));
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<IPoly> = minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p.clone()).collect();
        let (e, c) = lead(&minimal[k]);
        let mut tail = minimal[k].clone();
        tail.remove(e);
        let mut r = reduce(&tail, &others, None);
        r.insert(e.clone(), c.clone());
        out.push(monic(&r));
    }
    out.sort_by(|a, b| lead(b).0.cmp(lead(a).0));
    out
}

impl GroebnerBasis {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn normal_form(&self, f: &Poly) -> Result<NormalForm> {
        let mut nf = normal_form(f, &self.polys, &self.order)?;
        nf.canonical = true;
        Ok(nf)
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(f)?.remainder.is_zero())
    }

    pub fn leading_monomials(&self) -> Result<Vec<Monomial>> {
        self.polys.iter().map(|p| Ok(leading_term(p, &self.order)?.0)).collect()
    }

    /// Number of S-pairs of the basis with a nonzero remainder; zero exactly
    /// when the basis is a Groebner basis. Pairs with coprime leading terms
    /// always reduce to zero and are not divided out.
    pub fn nonzero_s_pairs(&self) -> Result<usize> {
        let ring = Ring::new(&self.order, &self.polys)?;
        let g: Vec<IPoly> = self.polys.iter().map(|p| ring.import(p)).collect();
        let mut bad = 0;
        for j in 0..g.len() {
            for i in 0..j {
                let coprime = lead(&g[i]).0.iter().zip(lead(&g[j]).0).all(|(a, b)| *a == 0 || *b == 0);
                if !coprime && !reduce(&s_poly(&g[i], &g[j]), &g, None).is_empty() {
                    bad += 1;
                }
            }
        }
        Ok(bad)
    }

    /// One polynomial per line in canonical text form.
    pub fn to_text(&self) -> String {
        self.polys.iter().map(|p| format!("{p}\n")).collect()
    }

    pub fn from_text(text: &str, order: MonomialOrder) -> Result<Self> {
        let polys = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| crate::scalar_poly::parse_polynomial::<Rational>(l, crate::scalar_poly::Universe::Relations, None))
            .collect::<Result<_>>()?;
        Ok(GroebnerBasis { order, polys, stats: BuchbergerStats::default() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> VarId {
        VarId::free(0)
    }
    fn y() -> VarId {
        VarId::free(1)
    }
    fn lex() -> MonomialOrder {
        MonomialOrder::lex(&[x(), y()])
    }
    fn p(terms: &[(i64, u32, u32)]) -> Poly {
        Poly::from_terms(terms.iter().map(|(c, a, b)| (Monomial::from_pairs([(x(), *a), (y(), *b)]), Rational::from_integer((*c).into()))))
    }

    #[test]
    fn leading_terms() {
        let f = Poly::var(VarId::gr_t(2, 0)) + Poly::var(VarId::gr_q(1, 1, 0, 1));
        assert_eq!(leading_term(&f, &MonomialOrder::Ranked).unwrap().0, Monomial::var(VarId::gr_q(1, 1, 0, 1)));
        let m = p(&[(3, 1, 2)]);
        assert_eq!(leading_term(&m, &lex()).unwrap(), (Monomial::from_pairs([(x(), 1), (y(), 2)]), Rational::from_integer(3.into())));
        assert!(leading_term(&Poly::zero(), &lex()).is_err());
    }

    #[test]
    fn ranked_variable_order() {
        let o = MonomialOrder::Ranked;
        let chain = [
            VarId::gr_q(3, 3, 0, 1),
            VarId::gr_q(2, 3, 1, 0),
            VarId::gr_q(2, 2, 0, 1),
            VarId::gr_q(1, 3, 1, 0),
            VarId::gr_q(1, 2, 1, 1),
            VarId::gr_q(1, 1, 0, 1),
            VarId::gr_t(1, 0),
            VarId::gr_t(0, 1),
            VarId::gr_t(2, 1),
            VarId::gr_t(2, 0),
        ];
        for w in chain.windows(2) {
            assert_eq!(o.cmp_vars(&w[0], &w[1]).unwrap(), Ordering::Greater, "{} > {}", w[0], w[1]);
        }
        // second index first, then the first
        assert_eq!(o.cmp_vars(&VarId::gr_q(3, 3, 0, 2), &VarId::gr_q(3, 3, 1, 1)).unwrap(), Ordering::Greater);
        assert_eq!(o.cmp_vars(&VarId::gr_q(2, 3, 2, 1), &VarId::gr_q(2, 3, 1, 1)).unwrap(), Ordering::Greater);
        assert!(o.rank(&VarId::free(0)).is_err());
    }

    #[test]
    fn s_polynomial_examples() {
        let f = p(&[(1, 2, 0), (-1, 0, 1)]);
        let g = p(&[(1, 1, 1), (-1, 0, 0)]);
        assert_eq!(s_polynomial(&f, &g, &lex()).unwrap(), p(&[(1, 1, 0), (-1, 0, 2)]));
        assert!(s_polynomial(&f, &f, &lex()).unwrap().is_zero());
        let a = p(&[(1, 2, 0), (1, 0, 1)]);
        let b = p(&[(1, 0, 2), (1, 0, 0)]);
        let s = s_polynomial(&a, &b, &lex()).unwrap();
        assert!(normal_form(&s, &[a, b], &lex()).unwrap().remainder.is_zero());
        assert!(s_polynomial(&Poly::zero(), &g, &lex()).is_err());
    }

    #[test]
    fn division_certificate() {
        let f = p(&[(1, 3, 1), (2, 1, 2), (-5, 0, 0)]);
        let basis = vec![p(&[(1, 2, 0), (-1, 0, 1)]), p(&[(1, 1, 1), (-1, 0, 0)])];
        let nf = normal_form(&f, &basis, &lex()).unwrap();
        let mut back = nf.remainder.clone();
        for (q, g) in nf.quotients.iter().zip(&basis) {
            back = back + q * g;
        }
        assert_eq!(back, f);
        let lts: Vec<Monomial> = basis.iter().map(|g| leading_term(g, &lex()).unwrap().0).collect();
        assert!(nf.remainder.monomials().all(|m| lts.iter().all(|l| !l.divides(m))));
        assert!(!nf.canonical);
    }

    #[test]
    fn buchberger_small() {
        let gens = vec![p(&[(1, 2, 0), (-1, 0, 1)]), p(&[(1, 1, 1), (-1, 0, 0)])];
        let gb = buchberger(&gens, &lex(), BuchbergerOptions::default()).unwrap();
        // reduced basis, independently computed
        assert_eq!(gb.polys, vec![p(&[(1, 1, 0), (-1, 0, 2)]), p(&[(1, 0, 3), (-1, 0, 0)])]);
        assert_eq!(gb.nonzero_s_pairs().unwrap(), 0);
        for g in &gens {
            assert!(gb.contains(g).unwrap());
        }
        assert!(gb.contains(&p(&[(1, 0, 2), (-1, 1, 0)])).unwrap());
        // the three-element list is not closed under S-pairs
        let listed = GroebnerBasis { order: lex(), polys: vec![gens[0].clone(), gens[1].clone(), p(&[(1, 0, 2), (-1, 1, 0)])], stats: Default::default() };
        assert!(listed.nonzero_s_pairs().unwrap() > 0);
        let chained = buchberger(&gens, &lex(), BuchbergerOptions { chain_criterion: true, ..Default::default() }).unwrap();
        assert_eq!(chained.polys, gb.polys);
    }

    #[test]
    fn principal_ideal() {
        let f = p(&[(2, 2, 1), (4, 0, 1), (-6, 0, 0)]);
        let gb = buchberger(std::slice::from_ref(&f), &lex(), BuchbergerOptions::default()).unwrap();
        assert_eq!(gb.polys, vec![f.scale(&Rational::new(1.into(), 2.into()))]);
        let text = gb.to_text();
        let back = GroebnerBasis::from_text(&text, lex()).unwrap();
        assert_eq!(back.polys, gb.polys);
    }
}
