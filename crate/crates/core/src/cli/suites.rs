use std::path::Path;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::expr::EvalContext;
use crate::error::{Error, Result};
use crate::gr_bridge::{compare_table, FiltrationSpec, TableComparison, TableOp};
use crate::groebner::{build_truncated_ideal, ft_monomials, phi, verify_leading_terms, BuchbergerOptions};
use crate::invariant_ring::{
    epsilon_support_q, epsilon_support_tau, howe_dims, independence_witness, jacobian_rank, tau, verify_invariant_components, verify_weyl,
    weight_monomials, Independence, LoopAction,
};
use crate::report::{Params, VerificationReport};
use crate::scalar_poly::{Scalar, VarId};
use crate::structures::{abelian, build_thetas, current_algebra, ghost_algebra, mat_mul, rho_hat, sl2_adjoint, RState};
use crate::vertex_engine::{var_weight, Engine, Generator, Identity, State};
use crate::{Poly, Rational};

pub const SUITES: [&str; 10] = [
    "ope-currents",
    "virasoro",
    "identities",
    "commutant-membership",
    "gr-compat",
    "weyl",
    "tau-independence",
    "groebner",
    "theorem41",
    "howe-dims",
];

/// Suites that only make sense for sl(2) acting on itself.
const SL2_ONLY: [&str; 6] = ["gr-compat", "weyl", "tau-independence", "groebner", "theorem41", "howe-dims"];

pub fn run_suite(name: &str, params: &Params, cache_dir: Option<&Path>) -> Result<VerificationReport> {
    let start = Instant::now();
    if name == "all" {
        let mut report = VerificationReport::new("all", params.clone());
        for s in SUITES {
            if SL2_ONLY.contains(&s) && params.algebra != "sl2-adjoint" {
                continue;
            }
            report.merge(run_suite(s, params, cache_dir)?);
        }
        return Ok(report.finish(start));
    }
    if !SUITES.contains(&name) {
        return Err(Error::UnknownSuite(name.into()));
    }
    if SL2_ONLY.contains(&name) && params.algebra != "sl2-adjoint" {
        return Err(Error::Precondition(format!("suite '{name}' is defined for sl2-adjoint only")));
    }
    let mut r = VerificationReport::new(name, params.clone());
    match name {
        "ope-currents" => ope_currents(&mut r, params)?,
        "virasoro" => virasoro(&mut r, params)?,
        "identities" => identities(&mut r, params)?,
        "commutant-membership" => membership(&mut r, params)?,
        "gr-compat" => gr_compat(&mut r)?,
        "weyl" => weyl(&mut r)?,
        "tau-independence" => tau_independence(&mut r, params)?,
        "groebner" => groebner(&mut r, params, cache_dir)?,
        "theorem41" => invariant_components(&mut r, params)?,
        "howe-dims" => howe(&mut r, params)?,
        _ => unreachable!(),
    }
    Ok(r.finish(start))
}

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn ope_currents(r: &mut VerificationReport, params: &Params) -> Result<()> {
    let ctx = EvalContext::new(&params.algebra)?;
    let spec = &ctx.spec;
    let thetas = ctx.named.thetas(spec);
    let e = &ctx.ghost;
    let m = spec.lie_dim();
    for a in 0..m {
        for b in 0..m {
            let label = format!("{}.{}", spec.lie_names[a], spec.lie_names[b]);
            // theta^[a,b] from the structure constants
            let mut bracket = State::zero(e.algebra());
            for (c, t) in thetas.iter().enumerate() {
                let f = &spec.structure[a][b][c];
                if !f.is_zero() {
                    bracket = bracket.try_add(&t.scale(f))?;
                }
            }
            // B(a, b) = -tr(rho(a) rho(b))
            let prod = mat_mul(&spec.rho[a], &spec.rho[b]);
            let form = -(0..spec.rep_dim()).fold(Rational::zero(), |acc, i| acc + &prod[i][i]);
            let prods: Vec<RState> = (0..=3).map(|n| e.circle_product(&thetas[a], n, &thetas[b])).collect::<Result<_>>()?;
            r.check(format!("{label}/o0"), &bracket, &prods[0]);
            r.check(format!("{label}/o1"), e.vacuum().scale(&form), &prods[1]);
            for (n, p) in prods.iter().enumerate().skip(2) {
                r.check(format!("{label}/o{n}"), 0, p);
            }
        }
    }
    if spec.name == "sl2-adjoint" {
        let lit = |a: usize, n: i64, b: usize| e.circle_product(&thetas[a], n, &thetas[b]);
        r.check("literal/x.y/o0", &thetas[2], lit(0, 0, 1)?);
        r.check("literal/h.x/o0", thetas[0].scale(&q(2)), lit(2, 0, 0)?);
        r.check("literal/x.y/o1", e.vacuum().scale(&q(-4)), lit(0, 1, 1)?);
        r.check("literal/h.h/o1", e.vacuum().scale(&q(-8)), lit(2, 1, 2)?);
    }
    Ok(())
}

fn virasoro(r: &mut VerificationReport, params: &Params) -> Result<()> {
    let ctx = EvalContext::new(&params.algebra)?;
    let spec = &ctx.spec;
    let e = &ctx.ghost;
    let dim_v = q(spec.rep_dim() as i64);
    let dim_g = q(spec.lie_dim() as i64);
    let l_s = ctx.named.get("L_S").expect("always built");
    let c_s = &dim_v * q(2);
    r.check_result("L_S/central-charge", format!("virasoro c={c_s}"), e.verify_virasoro(l_s, &c_s).map(|ok| verdict(ok, &c_s)));
    match (spec.level(), ctx.named.get("L_O"), ctx.current.as_ref()) {
        (Ok(lambda), Some(l_o), Some(ce)) => {
            let c_o = &lambda * q(2) * &dim_g / (&lambda * q(2) + Rational::one());
            r.check_result("L_O/central-charge", format!("virasoro c={c_o}"), ce.verify_virasoro(l_o, &c_o).map(|ok| verdict(ok, &c_o)));
            let c_l = &c_s - &c_o;
            let script_l = ctx.named.get("script_L").expect("built with L_O");
            r.check_result(
                "script_L/central-charge",
                format!("virasoro c={c_l}"),
                e.verify_virasoro(script_l, &c_l).map(|ok| verdict(ok, &c_l)),
            );
            let image = rho_hat(spec, e, l_o)?;
            for (a, t) in ctx.named.thetas(spec).iter().enumerate() {
                r.check_result(format!("rho(L_O)/primary/theta_{}", spec.lie_names[a]), true, e.check_primary(&image, t, 1).map(|b| b.to_string()));
            }
        }
        _ => {
            r.record("L_O", "absent", "absent: the Killing form is degenerate or B is not a multiple of it", true);
        }
    }
    for i in 0..spec.rep_dim() {
        let b = e.generator(Generator::Beta(i), 0)?;
        let g = e.generator(Generator::Gamma(i), 0)?;
        r.check_result(format!("L_S/primary/beta_{}", i + 1), true, e.check_primary(l_s, &b, 1).map(|x| x.to_string()));
        r.check_result(format!("L_S/primary/gamma_{}", i + 1), true, e.check_primary(l_s, &g, 0).map(|x| x.to_string()));
    }
    Ok(())
}

fn verdict(ok: bool, c: &Rational) -> String {
    if ok {
        format!("virasoro c={c}")
    } else {
        "not virasoro with this charge".into()
    }
}

/// A random homogeneous state of weight `<= 4` with at most three terms.
fn random_state(e: &Engine<Rational>, pools: &[Vec<crate::Monomial>], rng: &mut ChaCha8Rng) -> Result<RState> {
    let w = rng.gen_range(0..pools.len());
    let terms = rng.gen_range(1..=3);
    let mut p = Poly::zero();
    for _ in 0..terms {
        let m = &pools[w][rng.gen_range(0..pools[w].len())];
        let c = loop {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                break c;
            }
        };
        p.add_term(m.clone(), q(c));
    }
    e.state(p)
}

pub const IDENTITY_TRIPLES: usize = 200;

fn identities(r: &mut VerificationReport, params: &Params) -> Result<()> {
    let ctx = EvalContext::new(&params.algebra)?;
    let e = &ctx.ghost;
    let dim = ctx.spec.rep_dim();
    let vars: Vec<VarId> = (0..dim).flat_map(|i| (0..4).flat_map(move |k| [VarId::beta(i, k), VarId::gamma(i, k)])).collect();
    let pools: Vec<Vec<crate::Monomial>> = (0..=4)
        .map(|w| {
            let vs: Vec<VarId> = vars.iter().copied().filter(|v| var_weight(v) <= w).collect();
            weight_monomials(&vs, w, 3).into_iter().filter(|m| !m.is_one() || w == 0).collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut passed = [0usize; 4];
    let mut first_failure: [Option<String>; 4] = Default::default();
    let which = [Identity::WickAssociator, Identity::WickDerivation, Identity::SkewSymmetry, Identity::ModeCommutator];
    for t in 0..IDENTITY_TRIPLES {
        let a = random_state(e, &pools, &mut rng)?;
        let b = random_state(e, &pools, &mut rng)?;
        let c = random_state(e, &pools, &mut rng)?;
        for (k, id) in which.iter().enumerate() {
            let ns: Vec<i64> = match id {
                Identity::WickDerivation => (0..=4).collect(),
                Identity::WickAssociator | Identity::SkewSymmetry => vec![0],
                Identity::ModeCommutator => (0..=2).collect(),
            };
            let mut ok = true;
            for n in ns {
                ok &= e.check_identity(*id, &a, &b, &c, n)?;
            }
            if ok {
                passed[k] += 1;
            } else if first_failure[k].is_none() {
                first_failure[k] = Some(format!("triple {t}: a={a}, b={b}, c={c}"));
            }
        }
    }
    let names = ["wick-associator", "wick-derivation", "skew-symmetry", "mode-commutator"];
    for k in 0..4 {
        let actual = match &first_failure[k] {
            None => format!("{}/{}", passed[k], IDENTITY_TRIPLES),
            Some(f) => format!("{}/{} ({f})", passed[k], IDENTITY_TRIPLES),
        };
        r.check(format!("{}/seeded-triples", names[k]), format!("{IDENTITY_TRIPLES}/{IDENTITY_TRIPLES}"), actual);
    }
    Ok(())
}

fn membership(r: &mut VerificationReport, params: &Params) -> Result<()> {
    let ctx = EvalContext::new(&params.algebra)?;
    let e = &ctx.ghost;
    let thetas = ctx.named.thetas(&ctx.spec);
    for name in ["script_L", "euler", "v_x", "v_y", "v_h"] {
        match ctx.named.get(name) {
            Some(s) => {
                let m = e.is_commutant_member(&thetas, s)?;
                let actual = match &m.witness {
                    None => "member".to_string(),
                    Some((i, n, w)) => format!("theta_{}({n}) gives {w}", ctx.spec.lie_names[*i]),
                };
                r.check(format!("{name} in commutant of thetas"), "member", actual);
            }
            None => {
                r.record(format!("{name} in commutant of thetas"), "absent", "absent for this algebra", true);
            }
        }
    }
    let triple: Vec<RState> = ["v_x", "v_y", "v_h"].iter().filter_map(|n| ctx.named.get(n).cloned()).collect();
    if triple.len() == 3 {
        for (a, t) in thetas.iter().enumerate() {
            let m = e.is_commutant_member(&triple, t)?;
            r.check(format!("theta_{} in commutant of v", ctx.spec.lie_names[a]), true, m.member);
        }
    }
    let beta = e.generator(Generator::Beta(0), 0)?;
    let m = e.is_commutant_member(&thetas, &beta)?;
    r.check("beta_1 not in commutant of thetas", false, m.member && !thetas.iter().all(|t| t.is_zero()));
    Ok(())
}

const TABLE_LEVEL: u32 = 6;

fn table_line(c: &TableComparison) -> String {
    match c.mismatches.first() {
        None => format!("0 mismatches in {}", c.checked),
        Some(m) => format!(
            "{} mismatches in {}; first: n={} on {}: engine {} table {}",
            c.mismatches.len(),
            c.checked,
            m.n,
            m.var,
            m.engine,
            m.table
        ),
    }
}

fn gr_compat(r: &mut VerificationReport) -> Result<()> {
    let s = sl2_adjoint();
    let e = Engine::new(ghost_algebra(&s));
    let f = FiltrationSpec::new(&e, 1)?;
    let ok = |c: &TableComparison| format!("0 mismatches in {}", c.checked);
    for a in 0..3 {
        let c = compare_table(&s, &e, &f, TableOp::Theta(a), TABLE_LEVEL, TABLE_LEVEL, true)?;
        r.check(format!("theta_{} table", s.lie_names[a]), ok(&c), table_line(&c));
    }
    let c = compare_table(&s, &e, &f, TableOp::VH, TABLE_LEVEL, TABLE_LEVEL, true)?;
    r.check("v_h table", ok(&c), table_line(&c));
    // the raising and lowering rows are printed for an orthonormal basis
    let o = abelian(3);
    let oe = Engine::new(ghost_algebra(&o));
    let of = FiltrationSpec::new(&oe, 1)?;
    let c = compare_table(&o, &oe, &of, TableOp::VX, TABLE_LEVEL, TABLE_LEVEL, true)?;
    r.check("v_x table as printed (orthonormal basis)", ok(&c), table_line(&c));
    let c = compare_table(&o, &oe, &of, TableOp::VY, TABLE_LEVEL, TABLE_LEVEL, true)?;
    r.record("v_y table as printed (orthonormal basis), logged", "discrepancy logged with engine value", table_line(&c), true);
    for (name, op) in [("v_x", TableOp::VX), ("v_y", TableOp::VY)] {
        let c = compare_table(&s, &e, &f, op, TABLE_LEVEL, TABLE_LEVEL, false)?;
        r.check(format!("{name} table with Gram matrix"), ok(&c), table_line(&c));
    }
    r.check("k of the ghost system", 2, f.k.map_or("none".into(), |k| k.to_string()));
    let ce = Engine::new(current_algebra(&s, s.trace_form())?);
    let cf = FiltrationSpec::new(&ce, 1)?;
    r.check("k of the current algebra", 1, cf.k.map_or("none".into(), |k| k.to_string()));
    Ok(())
}

pub const WEYL_COPIES: usize = 4;
pub const WEYL_DEGREE: u32 = 4;

fn weyl(r: &mut VerificationReport) -> Result<()> {
    for copies in 1..=WEYL_COPIES {
        for row in verify_weyl(copies, WEYL_DEGREE)? {
            r.check(format!("copies={copies}/degree={}", row.degree), row.invariant_dim, row.q_span_dim);
            if copies == WEYL_COPIES && row.degree == WEYL_DEGREE {
                r.check("relation deficit at 4 copies, degree 4", 1, row.q_monomials - row.q_span_dim);
            }
        }
    }
    let rels = crate::invariant_ring::plucker_relations(1);
    r.check("relations among q vanish (N=1)", rels.len(), rels.iter().filter(|x| x.in_p().is_zero()).count());
    Ok(())
}

pub const TAU_MAX_K: u32 = 3;

fn tau_independence(r: &mut VerificationReport, params: &Params) -> Result<()> {
    let taus: Vec<Poly> = (0..3).flat_map(|u| (0..=TAU_MAX_K).map(move |k| tau(u, k))).collect();
    let w = independence_witness(&taus, params.seed);
    r.check("tau independence witness (k <= 3)", "independent", if w == Independence::Independent { "independent" } else { "inconclusive" });
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let point: std::collections::HashMap<VarId, Rational> =
        taus.iter().flat_map(|p| p.vars()).map(|v| (v, q(rng.gen_range(-9..=9)))).collect();
    r.check("jacobian rank at a seeded point", 12, jacobian_rank(&taus, &|v| point[v].clone()));
    for row in howe_dims(&sl2_adjoint(), params.max_weight)? {
        r.check(format!("weight {} image rank equals PBW count", row.weight), row.pbw_count, row.image_rank);
    }
    Ok(())
}

fn groebner(r: &mut VerificationReport, params: &Params, cache_dir: Option<&Path>) -> Result<()> {
    let n = params.level;
    let mut ctx = build_truncated_ideal(n)?;
    let modules = 3 * (n as usize + 1);
    let subsets = modules * (modules - 1) * (modules - 2) * (modules - 3) / 24;
    r.check("generator count (4-subsets of modules)", subsets, ctx.generators.len());
    r.check("generators vanish under phi", ctx.generators.len(), ctx.generators.iter().filter(|g| phi(g).is_zero()).count());
    let opts = BuchbergerOptions { chain_criterion: n >= 2, ..Default::default() };
    let gb = ctx.compute_basis(cache_dir, opts)?.clone();
    r.check("S-pairs with nonzero remainder", 0, gb.nonzero_s_pairs()?);
    r.check("generators reduce to zero", ctx.generators.len(), ctx.generators.iter().map(|g| gb.contains(g)).collect::<Result<Vec<_>>>()?.into_iter().filter(|b| *b).count());
    let ts = ft_monomials(n, n, 3);
    let mut normal = 0;
    for m in &ts {
        let p = Poly::monomial(m.clone());
        if gb.normal_form(&p)?.remainder == p {
            normal += 1;
        }
    }
    r.check("T-monomials in normal form (level <= N, degree <= 3)", ts.len(), normal);
    r.merge(verify_leading_terms(n, &gb)?);
    Ok(())
}

fn invariant_components(r: &mut VerificationReport, params: &Params) -> Result<()> {
    let s = sl2_adjoint();
    let n = params.level;
    for row in verify_invariant_components(&s, n, params.max_level, params.max_degree)? {
        r.check(format!("N={n}/level={}/degree={}", row.level, row.degree), row.tau_dim, row.kernel_dim);
    }
    let action = LoopAction::new(&s, n, n)?;
    let killed = (0..3).flat_map(|u| (0..=n).map(move |k| (u, k))).filter(|(u, k)| action.annihilates(&tau(*u, *k), n)).count();
    r.check("taus killed by all modes n <= N", 3 * (n as usize + 1), killed);
    let examples: [(&[u32], &[u32], &[u32]); 4] = [(&[1], &[], &[1]), (&[], &[1], &[]), (&[1], &[1], &[]), (&[2], &[], &[1])];
    for (is, js, ks) in examples {
        let sq = epsilon_support_q(is, js, ks, 2);
        r.check(format!("epsilon support in q ({is:?},{js:?},{ks:?})"), true, sq.holds());
        let st = epsilon_support_tau(is, js, ks, 2);
        r.check(format!("epsilon support in tau ({is:?},{js:?},{ks:?})"), true, st.holds());
    }
    Ok(())
}

/// Coefficients of `prod_{n >= 1} (1 - q^n)^{-3}` up to `q^w`.
pub fn partition_series(w: usize) -> Vec<u64> {
    let mut c = vec![0u64; w + 1];
    c[0] = 1;
    for n in 1..=w {
        for _ in 0..3 {
            for k in n..=w {
                c[k] += c[k - n];
            }
        }
    }
    c
}

fn howe(r: &mut VerificationReport, params: &Params) -> Result<()> {
    let series = partition_series(params.max_weight as usize);
    for row in howe_dims(&sl2_adjoint(), params.max_weight)? {
        r.check(format!("weight {} commutant dimension", row.weight), series[row.weight as usize], row.kernel_dim);
        r.check(format!("weight {} PBW count", row.weight), series[row.weight as usize], row.pbw_count);
    }
    let thetas = build_thetas(&sl2_adjoint())?;
    r.check("theta count", 3, thetas.len());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_oracle() {
        assert_eq!(partition_series(4), vec![1, 3, 9, 22, 51]);
    }

    #[test]
    fn small_suites_pass() {
        let p = Params::default();
        for s in ["ope-currents", "virasoro", "commutant-membership", "weyl"] {
            let rep = run_suite(s, &p, None).unwrap();
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn other_algebras() {
        for alg in ["sl2-standard", "abelian-2"] {
            let p = Params { algebra: alg.into(), ..Params::default() };
            for s in ["ope-currents", "virasoro", "commutant-membership"] {
                let rep = run_suite(s, &p, None).unwrap();
                assert!(rep.pass, "{alg}: {rep}");
            }
            assert!(run_suite("weyl", &p, None).is_err());
        }
        assert_eq!(run_suite("nope", &Params::default(), None).unwrap_err(), Error::UnknownSuite("nope".into()));
    }

    #[test]
    fn deterministic() {
        let p = Params { seed: 3, ..Params::default() };
        let a = run_suite("tau-independence", &p, None).unwrap();
        let b = run_suite("tau-independence", &p, None).unwrap();
        assert_eq!(a.cases, b.cases);
    }
}
