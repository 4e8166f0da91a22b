use std::sync::OnceLock;

use commutant::groebner::{build_truncated_ideal, normal_form, phi, BuchbergerOptions, GroebnerBasis, MonomialOrder};
use commutant::scalar_poly::{parse_polynomial, sparse_kernel, Universe};
use commutant::structures::{abelian, ghost_algebra, sl2_adjoint};
use commutant::vertex_engine::{Engine, Identity, State};
use commutant::{Monomial, Polynomial, Rational, Scalar, VarId};
use proptest::prelude::*;

type Poly = Polynomial<Rational>;

fn coeff() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::frac(n, d))
}

fn monomial_over(vars: Vec<VarId>, max_degree: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(prop::sample::select(vars), 0..=max_degree).prop_map(Monomial::from_vars)
}

fn poly_over(vars: Vec<VarId>, max_degree: usize, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((monomial_over(vars, max_degree), coeff()), 0..=max_terms).prop_map(Poly::from_terms)
}

fn free_vars() -> Vec<VarId> {
    (0..4).map(VarId::free).collect()
}

fn free_poly() -> impl Strategy<Value = Poly> {
    poly_over(free_vars(), 3, 5)
}

proptest! {
    #[test]
    fn ring_axioms(a in free_poly(), b in free_poly(), c in free_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn partial_is_a_derivation(a in free_poly(), b in free_poly(), i in 0usize..4) {
        let v = VarId::free(i);
        prop_assert_eq!((&a * &b).partial(&v), &(&a.partial(&v) * &b) + &(&a * &b.partial(&v)));
    }

    #[test]
    fn evaluation_is_a_ring_map(a in free_poly(), b in free_poly(), xs in prop::collection::vec(coeff(), 4)) {
        let at = |v: &VarId| xs[v.index as usize].clone();
        prop_assert_eq!((&a * &b).evaluate(&at), a.evaluate(&at) * b.evaluate(&at));
        prop_assert_eq!((&a + &b).evaluate(&at), a.evaluate(&at) + b.evaluate(&at));
    }

    #[test]
    fn text_round_trip(a in free_poly()) {
        let back: Poly = parse_polynomial(&a.to_string(), Universe::Free, None).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn kernel_vectors_annihilate(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..5)) {
        let sparse: Vec<Vec<(usize, Rational)>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, x)| **x != 0).map(|(j, x)| (j, Rational::from_i64(*x))).collect())
            .collect();
        let kernel = sparse_kernel(&sparse, 5);
        for k in &kernel {
            for r in &rows {
                let dot = k.iter().fold(Rational::from_i64(0), |acc, (j, x)| acc + Rational::from_i64(r[*j]) * x.clone());
                prop_assert_eq!(dot, Rational::from_i64(0));
            }
        }
        // rank-nullity against an independent integer rank
        prop_assert_eq!(kernel.len(), 5 - integer_rank(&rows));
    }
}

fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut rank = 0;
    for col in 0..5 {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][col] != 0 {
                let (a, b) = (m[rank][col], m[i][col]);
                let pivot = m[rank].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot) {
                    *x = *x * a - p * b;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn ghost_vars(dim: usize, max_k: u32) -> Vec<VarId> {
    (0..dim).flat_map(|i| (0..=max_k).flat_map(move |k| [VarId::beta(i, k), VarId::gamma(i, k)])).collect()
}

thread_local! {
    static SMALL: Engine<Rational> = Engine::new(ghost_algebra(&abelian(1)));
    static SL2: Engine<Rational> = Engine::new(ghost_algebra(&sl2_adjoint()));
}

fn state(e: &Engine<Rational>, p: Poly) -> State<Rational> {
    e.state(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vertex_identities(
        a in poly_over(ghost_vars(1, 2), 2, 2),
        b in poly_over(ghost_vars(1, 2), 2, 2),
        c in poly_over(ghost_vars(1, 2), 2, 2),
        n in 0i64..3,
    ) {
        SMALL.with(|e| {
            let (a, b, c) = (state(e, a), state(e, b), state(e, c));
            for id in [Identity::WickAssociator, Identity::WickDerivation, Identity::SkewSymmetry, Identity::ModeCommutator] {
                prop_assert!(e.check_identity(id, &a, &b, &c, n).unwrap(), "{:?} fails for n = {}", id, n);
            }
            Ok(())
        })?;
    }

    #[test]
    fn derivative_is_a_wick_derivation(a in poly_over(ghost_vars(3, 1), 2, 2), b in poly_over(ghost_vars(3, 1), 2, 2)) {
        SL2.with(|e| {
            let (a, b) = (state(e, a), state(e, b));
            let lhs = e.derivative(&e.wick(&a, &b).unwrap()).unwrap();
            let rhs = e.wick(&e.derivative(&a).unwrap(), &b).unwrap().try_add(&e.wick(&a, &e.derivative(&b).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })?;
    }

    #[test]
    fn circle_products_are_bilinear(a in poly_over(ghost_vars(3, 1), 2, 2), b in poly_over(ghost_vars(3, 1), 2, 2), c in poly_over(ghost_vars(3, 1), 2, 2), n in 0i64..3) {
        SL2.with(|e| {
            let (a, b, c) = (state(e, a), state(e, b), state(e, c));
            let sum = e.circle_product(&a, n, &b.try_add(&c).unwrap()).unwrap();
            let parts = e.circle_product(&a, n, &b).unwrap().try_add(&e.circle_product(&a, n, &c).unwrap()).unwrap();
            prop_assert_eq!(sum, parts);
            Ok(())
        })?;
    }
}

struct TruncatedIdeal {
    order: MonomialOrder,
    universe: Vec<VarId>,
    generators: Vec<Poly>,
    basis: GroebnerBasis,
}

fn ideal() -> &'static TruncatedIdeal {
    static I: OnceLock<TruncatedIdeal> = OnceLock::new();
    I.get_or_init(|| {
        let mut ctx = build_truncated_ideal(1).unwrap();
        let basis = ctx.compute_basis(None, BuchbergerOptions::default()).unwrap().clone();
        TruncatedIdeal { order: ctx.order.clone(), universe: ctx.universe.clone(), generators: ctx.generators.clone(), basis }
    })
}

fn f_poly() -> impl Strategy<Value = Poly> {
    poly_over(ideal().universe.clone(), 2, 4)
}

fn f_monomial() -> impl Strategy<Value = Monomial> {
    monomial_over(ideal().universe.clone(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_is_total_and_multiplicative(a in f_monomial(), b in f_monomial(), m in f_monomial()) {
        let ord = &ideal().order;
        let ab = ord.cmp_monomials(&a, &b).unwrap();
        prop_assert_eq!(ab.reverse(), ord.cmp_monomials(&b, &a).unwrap());
        prop_assert_eq!(ab == std::cmp::Ordering::Equal, a == b);
        prop_assert_eq!(ord.cmp_monomials(&a.mul(&m), &b.mul(&m)).unwrap(), ab);
        prop_assert_ne!(ord.cmp_monomials(&a.mul(&m), &a).unwrap(), std::cmp::Ordering::Less);
    }

    #[test]
    fn division_certificate(f in f_poly()) {
        let id = ideal();
        let nf = normal_form(&f, &id.basis.polys, &id.order).unwrap();
        let mut rebuilt = nf.remainder.clone();
        for (q, g) in nf.quotients.iter().zip(&id.basis.polys) {
            rebuilt = &rebuilt + &(q * g);
        }
        prop_assert_eq!(rebuilt, f);
        let leads = id.basis.leading_monomials().unwrap();
        for m in nf.remainder.monomials() {
            prop_assert!(leads.iter().all(|l| !l.divides(m)));
        }
    }

    #[test]
    fn normal_form_is_linear_and_idempotent(f in f_poly(), g in f_poly(), c in coeff()) {
        let gb = &ideal().basis;
        let nf = |p: &Poly| gb.normal_form(p).unwrap().remainder;
        let (rf, rg) = (nf(&f), nf(&g));
        prop_assert_eq!(nf(&rf), rf.clone());
        prop_assert_eq!(nf(&(&f + &g.scale(&c))), &rf + &rg.scale(&c));
    }

    #[test]
    fn ideal_elements_reduce_to_zero(mults in prop::collection::vec(f_poly(), 3), picks in prop::collection::vec(0usize..15, 3)) {
        let id = ideal();
        let mut h = Poly::zero();
        for (m, i) in mults.iter().zip(&picks) {
            h = &h + &(m * &id.generators[*i % id.generators.len()]);
        }
        prop_assert!(id.basis.contains(&h).unwrap());
        prop_assert!(phi(&h).is_zero());
    }

    #[test]
    fn phi_is_a_ring_map(f in f_poly(), g in f_poly()) {
        prop_assert_eq!(phi(&(&f * &g)), &phi(&f) * &phi(&g));
        prop_assert_eq!(phi(&(&f + &g)), &phi(&f) + &phi(&g));
    }
}
