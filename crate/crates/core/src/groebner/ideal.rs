use std::path::Path;
use std::time::Instant;

use super::{buchberger, leading_term, BuchbergerOptions, GroebnerBasis, MonomialOrder};
use crate::error::{Error, Result};
use crate::invariant_ring::{plucker_relations, q_of, tau, PluckerRelation};
use crate::report::{Params, VerificationReport};
use crate::scalar_poly::{Family, Monomial, VarId};
use crate::vertex_engine::binom;
use crate::{Poly, Rational};

/// Bumped whenever the variable ranking changes; part of the cache key.
pub const ORDER_REVISION: u32 = 1;

const MIXED: [(u16, u16); 3] = [(1, 2), (1, 3), (2, 3)];
const DIAGONAL: [(u16, u16); 3] = [(1, 1), (2, 2), (3, 3)];

/// `T` family paired with a mixed `q` family.
fn t_family(a: u16, b: u16) -> usize {
    match (a, b) {
        (1, 3) => 0,
        (2, 3) => 1,
        _ => 2,
    }
}

/// Variables of `F` with indices `<= n`: mixed `Q` with `i > 0`, diagonal
/// `Q` with `k < l`, and `T^u_m`.
pub fn f_universe(n: u32) -> Vec<VarId> {
    let mut out = Vec::new();
    for (a, b) in MIXED {
        for i in 1..=n {
            for j in 0..=n {
                out.push(VarId::gr_q(a, b, i, j));
            }
        }
    }
    for (a, b) in DIAGONAL {
        for k in 0..=n {
            for l in k + 1..=n {
                out.push(VarId::gr_q(a, b, k, l));
            }
        }
    }
    for u in 0..3 {
        for m in 0..=n {
            out.push(VarId::gr_t(u, m));
        }
    }
    out.sort();
    out
}

/// A `q` variable written in `F`: level-0 mixed ones become
/// `T^u_k - sum_{i >= 1} binom(k, i) Q_{i, k-i}`, the rest stay.
pub fn eliminate_q(v: &VarId) -> Poly {
    let (a, b) = v.q_pair();
    if a == b || v.level > 0 {
        return Poly::var(*v);
    }
    let k = v.extra;
    let mut p = Poly::var(VarId::gr_t(t_family(a, b), k));
    for i in 1..=k {
        p.add_scaled(&Poly::var(VarId::gr_q(a, b, i, k - i)), &-binom::<Rational>(k as i64, i as i64));
    }
    p
}

pub fn relation_in_f(r: &PluckerRelation) -> Poly {
    let mut out = Poly::zero();
    for (c, v1, v2) in &r.terms {
        out.add_scaled(&(&eliminate_q(v1) * &eliminate_q(v2)), c);
    }
    out
}

/// The image of an `F` variable in the graded ring.
pub fn phi_var(v: &VarId) -> Poly {
    match v.family {
        Family::GrQ => q_of(v),
        Family::GrT => tau(v.index as usize, v.level),
        _ => Poly::var(*v),
    }
}

pub fn phi(f: &Poly) -> Poly {
    f.substitute(&|v| Some(phi_var(v)))
}

/// The truncated ideal of relations among the `F` variables.
#[derive(Clone, Debug)]
pub struct GrobnerContext {
    pub level: u32,
    pub universe: Vec<VarId>,
    pub order: MonomialOrder,
    pub relations: Vec<PluckerRelation>,
    pub generators: Vec<Poly>,
    pub basis: Option<GroebnerBasis>,
}

pub fn build_truncated_ideal(n: u32) -> Result<GrobnerContext> {
    if n > 3 {
        return Err(Error::Precondition(format!("truncation {n} is beyond 3")));
    }
    let relations = plucker_relations(n);
    let generators = relations.iter().map(relation_in_f).collect();
    Ok(GrobnerContext { level: n, universe: f_universe(n), order: MonomialOrder::Ranked, relations, generators, basis: None })
}

impl GrobnerContext {
    pub fn cache_file(&self, dir: &Path) -> std::path::PathBuf {
        dir.join(format!("groebner-n{}-order{}.txt", self.level, ORDER_REVISION))
    }

    /// Runs Buchberger, or loads a cached basis from `cache_dir` when one
    /// exists and writes it otherwise.
    pub fn compute_basis(&mut self, cache_dir: Option<&Path>, opts: BuchbergerOptions) -> Result<&GroebnerBasis> {
        if let Some(dir) = cache_dir {
            let path = self.cache_file(dir);
            if let Ok(text) = std::fs::read_to_string(&path) {
                self.basis = Some(GroebnerBasis::from_text(&text, self.order.clone())?);
            } else {
                let gb = buchberger(&self.generators, &self.order, opts)?;
                std::fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
                std::fs::write(&path, gb.to_text()).map_err(|e| Error::Io(e.to_string()))?;
                self.basis = Some(gb);
            }
        } else {
            self.basis = Some(buchberger(&self.generators, &self.order, opts)?);
        }
        Ok(self.basis.as_ref().expect("just set"))
    }
}

/// Relation with leading term `Q^{3,3}_{i,j} T^h_0`, for `i < j`.
pub fn relation_q33(i: u32, j: u32) -> Poly {
    relation_in_f(&crate::invariant_ring::plucker_relations_for(&[(1, 0), (2, 0), (3, i), (3, j)])[0])
}

/// Relation with leading term `Q^{2,3}_{i,j} T^h_0`, for `i > 0`.
pub fn relation_q23(i: u32, j: u32) -> Poly {
    relation_in_f(&crate::invariant_ring::plucker_relations_for(&[(1, 0), (2, 0), (2, i), (3, j)])[0])
}

/// Monomials in the `T^u_m`, `m <= n`, of total level `<= max_level` and
/// degree `<= max_degree`.
pub fn ft_monomials(n: u32, max_level: u32, max_degree: u32) -> Vec<Monomial> {
    let vars: Vec<VarId> = (0..3).flat_map(|u| (0..=n).map(move |m| VarId::gr_t(u, m))).collect();
    let mut out = vec![Monomial::one()];
    for v in vars {
        let mut next = Vec::new();
        for m in &out {
            let mut cur = m.clone();
            next.push(cur.clone());
            loop {
                cur = cur.mul_var(v);
                let level: u32 = cur.factors().iter().map(|(w, e)| w.level * e).sum();
                if cur.degree() > max_degree || level > max_level {
                    break;
                }
                next.push(cur.clone());
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// The leading-term claims for `Q^{3,3}_{i,j} T^h_0` and `Q^{2,3}_{i,j} T^h_0`
/// together with ideal membership of the relations realizing them.
pub fn verify_leading_terms(n: u32, basis: &GroebnerBasis) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new("leading-terms", Params { level: n, ..Params::default() });
    let th0 = VarId::gr_t(2, 0);
    let mut check = |name: String, rel: Poly, lead_var: VarId| -> Result<()> {
        let want = Monomial::from_vars([lead_var, th0]);
        let (lt, _) = leading_term(&rel, &basis.order)?;
        report.check(format!("{name}/leading"), want.render(None), lt.render(None));
        report.check(format!("{name}/phi"), 0, phi(&rel));
        report.check(format!("{name}/normal-form"), 0, basis.normal_form(&rel)?.remainder);
        Ok(())
    };
    for j in 0..=n {
        for i in 0..j {
            check(format!("Q33[{i},{j}]"), relation_q33(i, j), VarId::gr_q(3, 3, i, j))?;
        }
    }
    for i in 1..=n {
        for j in 0..=n {
            check(format!("Q23[{i},{j}]"), relation_q23(i, j), VarId::gr_q(2, 3, i, j))?;
        }
    }
    let leads = basis.leading_monomials()?;
    let divisible = ft_monomials(n, n, 3).iter().filter(|m| leads.iter().any(|l| l.divides(m))).count();
    report.check("T-monomials-reduced", 0, divisible);
    Ok(report.finish(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn n1() -> (GrobnerContext, GroebnerBasis) {
        let mut ctx = build_truncated_ideal(1).unwrap();
        let gb = ctx.compute_basis(None, BuchbergerOptions::default()).unwrap().clone();
        (ctx, gb)
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(f_universe(1).len(), 15);
        assert_eq!(f_universe(2).len(), 18 + 9 + 9);
    }

    #[test]
    fn generators_vanish_in_p() {
        let ctx = build_truncated_ideal(1).unwrap();
        // one relation for each 4-subset of the six modules
        assert_eq!(ctx.generators.len(), 15);
        for g in &ctx.generators {
            assert!(!g.is_zero());
            assert!(phi(g).is_zero());
            assert!(g.vars().iter().all(|v| ctx.universe.contains(v)), "{g}");
        }
        let ctx2 = build_truncated_ideal(2).unwrap();
        assert_eq!(ctx2.generators.len(), 126);
        assert!(ctx2.generators.iter().all(|g| phi(g).is_zero()));
        assert!(build_truncated_ideal(4).is_err());
    }

    #[test]
    fn elimination_matches_tau() {
        for (a, b) in MIXED {
            for k in 0..=3 {
                let v = VarId::gr_q(a, b, 0, k);
                assert_eq!(phi(&eliminate_q(&v)), q_of(&v));
            }
        }
    }

    #[test]
    fn leading_relations_in_generators() {
        let ctx = build_truncated_ideal(2).unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!(ctx.generators.contains(&relation_q33(i, j)));
        }
        let want = Monomial::from_vars([VarId::gr_q(3, 3, 0, 1), VarId::gr_t(2, 0)]);
        assert_eq!(leading_term(&relation_q33(0, 1), &MonomialOrder::Ranked).unwrap().0, want);
    }

    #[test]
    fn basis_n1() {
        let (ctx, gb) = n1();
        assert_eq!(gb.nonzero_s_pairs().unwrap(), 0);
        for g in &ctx.generators {
            assert!(gb.contains(g).unwrap());
        }
        for p in &gb.polys {
            assert!(phi(p).is_zero());
        }
        let report = verify_leading_terms(1, &gb).unwrap();
        assert!(report.pass, "{report}");
    }

    #[test]
    fn t_monomials_are_normal() {
        let (_, gb) = n1();
        for m in ft_monomials(1, 1, 3) {
            let p = Poly::monomial(m);
            assert_eq!(gb.normal_form(&p).unwrap().remainder, p);
        }
        let m = Poly::monomial(Monomial::from_vars([VarId::gr_q(3, 3, 0, 1), VarId::gr_t(2, 0)]));
        let r = gb.normal_form(&m).unwrap().remainder;
        let lead = Monomial::from_vars([VarId::gr_q(3, 3, 0, 1), VarId::gr_t(2, 0)]);
        assert!(r.monomials().all(|x| !lead.divides(x)));
        assert_eq!(phi(&r), phi(&m));
    }

    #[test]
    fn ideal_absorbs_products() {
        let (ctx, gb) = n1();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ts = ft_monomials(1, 1, 2);
        for _ in 0..10 {
            let mut f = Poly::zero();
            for _ in 0..3 {
                let g = &ctx.generators[rng.gen_range(0..ctx.generators.len())];
                let t = &ts[rng.gen_range(0..ts.len())];
                f = f + g.mul_monomial(t).scale(&Rational::from_integer(rng.gen_range(-3i64..=3).into()));
            }
            assert!(gb.contains(&f).unwrap());
            assert!(phi(&f).is_zero());
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("commutant-gb-{}", std::process::id()));
        let mut a = build_truncated_ideal(1).unwrap();
        let first = a.compute_basis(Some(&dir), BuchbergerOptions::default()).unwrap().polys.clone();
        let mut b = build_truncated_ideal(1).unwrap();
        let second = b.compute_basis(Some(&dir), BuchbergerOptions::default()).unwrap().polys.clone();
        assert_eq!(first, second);
        std::fs::remove_dir_all(&dir).ok();
    }
}
