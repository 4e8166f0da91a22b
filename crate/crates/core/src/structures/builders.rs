use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::lie::{LieRepSpec, Matrix};
use crate::error::{Error, Result};
use crate::scalar_poly::{inverse, Monomial, Scalar, VarId};
use crate::vertex_engine::{AlgebraSpec, Engine, Generator, State};
use crate::{Poly, Rational};

pub type RState = State<Rational>;
pub type REngine = Engine<Rational>;

/// The beta-gamma system on the representation space of `spec`.
pub fn ghost_algebra(spec: &LieRepSpec) -> Arc<AlgebraSpec<Rational>> {
    Arc::new(AlgebraSpec::ghost_system(spec.rep_dim()))
}

/// The current algebra `O(g, form)`.
pub fn current_algebra(spec: &LieRepSpec, form: Matrix) -> Result<Arc<AlgebraSpec<Rational>>> {
    Ok(Arc::new(AlgebraSpec::current_algebra(form, spec.structure.clone())?))
}

/// `O(g, lambda K)`.
pub fn level_algebra(spec: &LieRepSpec, lambda: &Rational) -> Result<Arc<AlgebraSpec<Rational>>> {
    let k = spec.killing();
    current_algebra(spec, k.iter().map(|r| r.iter().map(|x| x * lambda).collect()).collect())
}

fn bg(i: usize, j: usize) -> Monomial {
    Monomial::from_vars([VarId::beta(i, 0), VarId::gamma(j, 0)])
}

/// `theta^{u_a} = -sum_{ij} rho(u_a)_{ji} beta^{x_j}(-1) gamma^{x'_i}(-1) 1`.
pub fn build_theta(spec: &LieRepSpec, a: usize) -> Result<RState> {
    if a >= spec.lie_dim() {
        return Err(Error::IndexOutOfRange { index: a, dim: spec.lie_dim() });
    }
    let n = spec.rep_dim();
    let mut p = Poly::zero();
    for i in 0..n {
        for j in 0..n {
            let c = &spec.rho[a][j][i];
            if !c.is_zero() {
                p.add_term(bg(j, i), -c.clone());
            }
        }
    }
    State::new(ghost_algebra(spec), p)
}

pub fn build_thetas(spec: &LieRepSpec) -> Result<Vec<RState>> {
    (0..spec.lie_dim()).map(|a| build_theta(spec, a)).collect()
}

/// Checks `theta^u o_1 theta^v = B(u, v)`, `theta^u o_0 theta^v = theta^[u,v]`
/// and the vanishing of higher products on all basis pairs.
pub fn check_current_ope(spec: &LieRepSpec, engine: &REngine, thetas: &[RState]) -> Result<bool> {
    let b = spec.trace_form();
    let m = spec.lie_dim();
    if thetas.len() != m {
        return Err(Error::Precondition(format!("expected {m} theta states, got {}", thetas.len())));
    }
    let vac = engine.vacuum();
    for u in 0..m {
        for v in 0..m {
            let mut bracket = State::zero(engine.algebra());
            for c in 0..m {
                bracket = bracket.try_add(&thetas[c].scale(&spec.structure[u][v][c]))?;
            }
            if engine.apply_mode(&thetas[u], 0, &thetas[v])? != bracket
                || engine.apply_mode(&thetas[u], 1, &thetas[v])? != vac.scale(&b[u][v])
            {
                return Ok(false);
            }
            for n in 2..4 {
                if !engine.apply_mode(&thetas[u], n, &thetas[v])?.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The Sugawara vector `1/(2 lambda + 1) sum_{ij} (K^-1)_{ij} :u_i u_j:` in
/// `O(g, lambda K)`.
pub fn sugawara(spec: &LieRepSpec, lambda: &Rational) -> Result<RState> {
    let two_l1 = lambda * Rational::from_i64(2) + Rational::one();
    if two_l1.is_zero() {
        return Err(Error::SingularLevel);
    }
    let kinv = inverse(&spec.killing()).ok_or_else(|| Error::InvalidSpec("Killing form is degenerate".into()))?;
    let engine = Engine::new(level_algebra(spec, lambda)?);
    let m = spec.lie_dim();
    let mut out = State::zero(engine.algebra());
    for i in 0..m {
        for j in 0..m {
            if kinv[i][j].is_zero() {
                continue;
            }
            let w = engine.wick(&engine.generator(Generator::Current(i), 0)?, &engine.generator(Generator::Current(j), 0)?)?;
            out = out.try_add(&w.scale(&kinv[i][j]))?;
        }
    }
    Ok(out.scale(&(Rational::one() / two_l1)))
}

/// The homomorphism `O(g, B) -> S(V)` sending `u(z)` to `theta^u(z)`,
/// applied to a PBW state by acting with theta modes on the vacuum.
pub fn rho_hat(spec: &LieRepSpec, engine: &REngine, a: &RState) -> Result<RState> {
    let thetas = build_thetas(spec)?;
    let mut out = Poly::zero();
    for (m, c) in a.value.terms() {
        let mut s = engine.vacuum();
        for v in m.expanded() {
            let Generator::Current(idx) = Generator::of(&v) else {
                return Err(Error::Precondition("rho_hat expects a current algebra state".into()));
            };
            s = engine.apply_mode(&thetas[idx], -(v.level as i64) - 1, &s)?;
        }
        out.add_scaled(&s.value, c);
    }
    engine.state(out)
}

/// `L_S = sum_i :beta^{x_i} d gamma^{x'_i}:`.
pub fn build_l_s(spec: &LieRepSpec) -> Result<RState> {
    let mut p = Poly::zero();
    for i in 0..spec.rep_dim() {
        p.add_term(Monomial::from_vars([VarId::beta(i, 0), VarId::gamma(i, 1)]), Rational::one());
    }
    State::new(ghost_algebra(spec), p)
}

/// `L_S - rho_hat(L_O)`, with `L_O` taken at the level `B = lambda K`.
pub fn build_script_l(spec: &LieRepSpec, engine: &REngine) -> Result<RState> {
    let lambda = spec.level()?;
    let l_o = sugawara(spec, &lambda)?;
    build_l_s(spec)?.try_sub(&rho_hat(spec, engine, &l_o)?)
}

/// `sum_i :beta^{x_i} gamma^{x'_i}:`; requires `Tr rho(u) = 0` for all `u`.
pub fn build_euler(spec: &LieRepSpec) -> Result<RState> {
    if !spec.traceless() {
        return Err(Error::Precondition("the Euler element needs Tr rho(u) = 0".into()));
    }
    let mut p = Poly::zero();
    for i in 0..spec.rep_dim() {
        p.add_term(bg(i, i), Rational::one());
    }
    State::new(ghost_algebra(spec), p)
}

/// `(v^x, v^y, v^h)` built from the invariant form `G` on V:
/// `v^x = 1/2 sum G_{jk} gamma_j gamma_k`, `v^y = -1/2 sum (G^-1)_{jk} beta_j beta_k`.
pub fn build_sl2_triple(spec: &LieRepSpec) -> Result<(RState, RState, RState)> {
    let g = spec.form.as_ref().ok_or(Error::MissingForm)?;
    let ginv = inverse(g).ok_or_else(|| Error::InvalidSpec("form on V is degenerate".into()))?;
    let n = spec.rep_dim();
    let half = Rational::frac(1, 2);
    let mut vx = Poly::zero();
    let mut vy = Poly::zero();
    for j in 0..n {
        for k in 0..n {
            vx.add_term(Monomial::from_vars([VarId::gamma(j, 0), VarId::gamma(k, 0)]), &half * &g[j][k]);
            vy.add_term(Monomial::from_vars([VarId::beta(j, 0), VarId::beta(k, 0)]), -&half * &ginv[j][k]);
        }
    }
    let alg = ghost_algebra(spec);
    Ok((State::new(alg.clone(), vx)?, State::new(alg, vy)?, build_euler(spec)?))
}

/// Named states assembled from one spec. Entries that do not exist for the
/// spec (no form, degenerate Killing form, trace) are absent.
#[derive(Clone, Debug)]
pub struct NamedOperatorSet {
    pub entries: BTreeMap<String, RState>,
}

impl NamedOperatorSet {
    pub fn build(spec: &LieRepSpec, engine: &REngine) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (a, name) in spec.lie_names.iter().enumerate() {
            entries.insert(format!("theta_{name}"), build_theta(spec, a)?);
        }
        entries.insert("L_S".into(), build_l_s(spec)?);
        if let Ok(lambda) = spec.level() {
            if let Ok(l_o) = sugawara(spec, &lambda) {
                entries.insert("script_L".into(), build_l_s(spec)?.try_sub(&rho_hat(spec, engine, &l_o)?)?);
                entries.insert("L_O".into(), l_o);
            }
        }
        if let Ok(e) = build_euler(spec) {
            entries.insert("euler".into(), e);
        }
        if let Ok((x, y, h)) = build_sl2_triple(spec) {
            entries.insert("v_x".into(), x);
            entries.insert("v_y".into(), y);
            entries.insert("v_h".into(), h);
        }
        Ok(NamedOperatorSet { entries })
    }

    pub fn get(&self, name: &str) -> Option<&RState> {
        self.entries.get(name)
    }

    /// The theta states in basis order.
    pub fn thetas(&self, spec: &LieRepSpec) -> Vec<RState> {
        spec.lie_names.iter().map(|n| self.entries[&format!("theta_{n}")].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::lie::{abelian, sl2_adjoint, sl2_standard};
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn setup() -> (LieRepSpec, REngine) {
        let s = sl2_adjoint();
        let e = Engine::new(ghost_algebra(&s));
        (s, e)
    }

    #[test]
    fn theta_formulas() {
        let (s, _) = setup();
        let tx = build_theta(&s, 0).unwrap();
        let mut want = Poly::zero();
        want.add_term(bg(0, 2), q(2));
        want.add_term(bg(2, 1), q(-1));
        assert_eq!(tx.value, want);
        let th = build_theta(&s, 2).unwrap();
        let mut want = Poly::zero();
        want.add_term(bg(0, 0), q(-2));
        want.add_term(bg(1, 1), q(2));
        assert_eq!(th.value, want);
        assert!(build_theta(&abelian(1), 0).unwrap().is_zero());
        assert!(build_theta(&s, 3).is_err());
    }

    #[test]
    fn current_opes_hold() {
        for spec in [sl2_adjoint(), sl2_standard(), abelian(1), abelian(2)] {
            let e = Engine::new(ghost_algebra(&spec));
            let t = build_thetas(&spec).unwrap();
            assert!(check_current_ope(&spec, &e, &t).unwrap(), "{}", spec.name);
        }
    }

    #[test]
    fn central_charges() {
        let (s, e) = setup();
        assert!(e.verify_virasoro(&build_l_s(&s).unwrap(), &q(6)).unwrap());
        let l_o = sugawara(&s, &q(-1)).unwrap();
        let ce = Engine::new(l_o.algebra.clone());
        assert!(ce.verify_virasoro(&l_o, &q(6)).unwrap());
        for a in 0..3 {
            let u = ce.generator(Generator::Current(a), 0).unwrap();
            assert!(ce.check_primary(&l_o, &u, 1).unwrap());
        }
        assert!(e.verify_virasoro(&build_script_l(&s, &e).unwrap(), &q(0)).unwrap());
        // 2 dim V - 2 lambda dim g / (2 lambda + 1) with dim V = 2, lambda = -1/4
        let st = sl2_standard();
        let se = Engine::new(ghost_algebra(&st));
        assert!(se.verify_virasoro(&build_script_l(&st, &se).unwrap(), &q(7)).unwrap());
    }

    #[test]
    fn singular_level() {
        assert_eq!(sugawara(&sl2_adjoint(), &Rational::frac(-1, 2)).unwrap_err(), Error::SingularLevel);
    }

    #[test]
    fn rho_hat_matches_thetas_and_brackets() {
        let (s, e) = setup();
        let lambda = s.level().unwrap();
        let ce = Engine::new(level_algebra(&s, &lambda).unwrap());
        let t = build_thetas(&s).unwrap();
        for a in 0..3 {
            let u = ce.generator(Generator::Current(a), 0).unwrap();
            assert_eq!(rho_hat(&s, &e, &u).unwrap(), t[a]);
            for b in 0..3 {
                let v = ce.generator(Generator::Current(b), 1).unwrap();
                for n in -2..3 {
                    let lhs = rho_hat(&s, &e, &ce.apply_mode(&u, n, &v).unwrap()).unwrap();
                    let rhs = e.apply_mode(&t[a], n, &rho_hat(&s, &e, &v).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn triple_and_euler() {
        let (s, e) = setup();
        let (vx, vy, vh) = build_sl2_triple(&s).unwrap();
        assert_eq!(e.apply_mode(&vx, 1, &vy).unwrap(), e.vacuum().scale(&Rational::frac(-3, 2)));
        assert_eq!(e.apply_mode(&vh, 1, &vh).unwrap(), e.vacuum().scale(&q(-3)));
        assert_eq!(e.apply_mode(&vh, 0, &vx).unwrap(), vx.scale(&q(2)));
        assert_eq!(e.apply_mode(&vh, 0, &vy).unwrap(), vy.scale(&q(-2)));
        assert_eq!(e.apply_mode(&vx, 0, &vy).unwrap(), vh);
        assert_eq!(vx.weight().unwrap(), 0);
        assert_eq!(vy.weight().unwrap(), 2);
        assert_eq!(build_sl2_triple(&sl2_standard()).unwrap_err(), Error::MissingForm);
        let a = abelian(3);
        let ae = Engine::new(ghost_algebra(&a));
        let (x, y, _) = build_sl2_triple(&a).unwrap();
        assert_eq!(ae.apply_mode(&x, 1, &y).unwrap(), ae.vacuum().scale(&Rational::frac(-3, 2)));
    }

    #[test]
    fn commutant_members() {
        let (s, e) = setup();
        let named = NamedOperatorSet::build(&s, &e).unwrap();
        let thetas = named.thetas(&s);
        for name in ["script_L", "euler", "v_x", "v_y", "v_h"] {
            assert!(e.is_commutant_member(&thetas, named.get(name).unwrap()).unwrap().member, "{name}");
        }
        let vs: Vec<RState> = ["v_x", "v_y", "v_h"].iter().map(|n| named.get(n).unwrap().clone()).collect();
        for t in &thetas {
            assert!(e.is_commutant_member(&vs, t).unwrap().member);
        }
        let beta = e.generator(Generator::Beta(0), 0).unwrap();
        let m = e.is_commutant_member(&thetas, &beta).unwrap();
        assert!(!m.member);
        assert!(m.witness.is_some());
        assert!(named.get("L_O").is_some());
    }

    #[test]
    fn standard_rep_triple_missing_but_rest_present() {
        let s = sl2_standard();
        let e = Engine::new(ghost_algebra(&s));
        let named = NamedOperatorSet::build(&s, &e).unwrap();
        assert!(named.get("v_x").is_none());
        assert!(named.get("euler").is_some());
        assert!(named.get("script_L").is_some());
    }
}
