use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::algebra::{AlgebraKind, AlgebraSpec, Generator};
use super::state::{monomial_weight, same_algebra, State};
use crate::error::{Error, Result};
use crate::scalar_poly::{apply_derivation, Monomial, Polynomial, Scalar, VarId};

/// Generalised binomial coefficient `n choose k` for any integer `n`.
pub fn binom<C: Scalar>(n: i64, k: i64) -> C {
    if k < 0 {
        return C::zero();
    }
    let mut out = C::one();
    for i in 0..k {
        out = out * C::frac(n - i, i + 1);
    }
    out
}

fn sign<C: Scalar>(odd: bool) -> C {
    if odd {
        -C::one()
    } else {
        C::one()
    }
}

/// Evaluates circle products `a o_n b` on one algebra, memoising products of
/// monomials. Not shared across threads; create one engine per task.
pub struct Engine<C: Scalar> {
    algebra: Arc<AlgebraSpec<C>>,
    products: RefCell<HashMap<(Monomial, i64, Monomial), Polynomial<C>>>,
    creations: RefCell<HashMap<(VarId, Monomial), Polynomial<C>>>,
    annihilations: RefCell<HashMap<(usize, i64, Monomial), Polynomial<C>>>,
}

/// The nonzero singular part `a o_n b`, `n >= 0`, of an OPE.
#[derive(Clone, Debug)]
pub struct OpeTable<C> {
    pub entries: Vec<(i64, State<C>)>,
}

impl<C: Scalar> OpeTable<C> {
    pub fn get(&self, n: i64) -> Option<&State<C>> {
        self.entries.iter().find(|(m, _)| *m == n).map(|(_, s)| s)
    }
}

impl<C: Scalar> fmt::Display for OpeTable<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return writeln!(f, "~ 0");
        }
        for (n, s) in self.entries.iter().rev() {
            let body = s.to_string();
            if s.value.len() > 1 {
                writeln!(f, "~ ({}) (z-w)^-{}", body, n + 1)?;
            } else {
                writeln!(f, "~ {} (z-w)^-{}", body, n + 1)?;
            }
        }
        Ok(())
    }
}

impl<C: Scalar> Engine<C> {
    pub fn new(algebra: Arc<AlgebraSpec<C>>) -> Self {
        Engine {
            algebra,
            products: RefCell::new(HashMap::new()),
            creations: RefCell::new(HashMap::new()),
            annihilations: RefCell::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec<C>> {
        &self.algebra
    }

    pub fn vacuum(&self) -> State<C> {
        State::vacuum(&self.algebra)
    }

    pub fn state(&self, value: Polynomial<C>) -> Result<State<C>> {
        State::new(self.algebra.clone(), value)
    }

    pub fn generator(&self, g: Generator, k: u32) -> Result<State<C>> {
        State::generator(&self.algebra, g, k)
    }

    pub fn cache_len(&self) -> usize {
        self.products.borrow().len()
    }

    fn check(&self, s: &State<C>) -> Result<()> {
        if same_algebra(&self.algebra, &s.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// The state `a(n) b`, equivalently the circle product `a o_n b`.
    pub fn apply_mode(&self, a: &State<C>, n: i64, b: &State<C>) -> Result<State<C>> {
        self.check(a)?;
        self.check(b)?;
        Ok(State::from_raw(self.algebra.clone(), self.mode_poly(&a.value, n, &b.value)))
    }

    pub fn circle_product(&self, a: &State<C>, n: i64, b: &State<C>) -> Result<State<C>> {
        self.apply_mode(a, n, b)
    }

    pub fn wick(&self, a: &State<C>, b: &State<C>) -> Result<State<C>> {
        self.apply_mode(a, -1, b)
    }

    /// Right-nested Wick product `:a_1 (:a_2 ... a_k:):`.
    pub fn iterated_wick(&self, items: &[State<C>]) -> Result<State<C>> {
        let Some((last, init)) = items.split_last() else { return Ok(self.vacuum()) };
        self.check(last)?;
        let mut acc = last.clone();
        for a in init.iter().rev() {
            acc = self.wick(a, &acc)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self, a: &State<C>) -> Result<State<C>> {
        self.check(a)?;
        Ok(State::from_raw(self.algebra.clone(), self.derivative_poly(&a.value)))
    }

    pub(crate) fn derivative_poly(&self, p: &Polynomial<C>) -> Polynomial<C> {
        match self.algebra.kind {
            AlgebraKind::GhostSystem => {
                let rules: HashMap<VarId, Polynomial<C>> = p
                    .vars()
                    .into_iter()
                    .map(|v| {
                        let up = VarId { level: v.level + 1, ..v };
                        (v, Polynomial::term(Monomial::var(up), C::from_i64(v.level as i64 + 1)))
                    })
                    .collect();
                apply_derivation(&rules, p)
            }
            AlgebraKind::CurrentAlgebra => self.mode_poly(p, -2, &Polynomial::one()),
        }
    }

    /// All nonzero `a o_n b` with `n >= 0` for homogeneous `a`, `b`.
    pub fn ope(&self, a: &State<C>, b: &State<C>) -> Result<OpeTable<C>> {
        let top = a.weight()? + b.weight()? - 1;
        let mut entries = Vec::new();
        for n in 0..=top {
            let s = self.apply_mode(a, n, b)?;
            if !s.is_zero() {
                entries.push((n, s));
            }
        }
        Ok(OpeTable { entries })
    }

    pub(crate) fn mode_poly(&self, a: &Polynomial<C>, n: i64, b: &Polynomial<C>) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (am, ac) in a.terms() {
            for (bm, bc) in b.terms() {
                let r = self.mode_mono(am, n, bm);
                out.add_scaled(&r, &(ac.clone() * bc.clone()));
            }
        }
        out
    }

    fn mode_mono(&self, am: &Monomial, n: i64, bm: &Monomial) -> Polynomial<C> {
        if am.is_one() {
            return if n == -1 { Polynomial::monomial(bm.clone()) } else { Polynomial::zero() };
        }
        let wb = monomial_weight(bm);
        if monomial_weight(am) + wb - n - 1 < 0 {
            return Polynomial::zero();
        }
        let key = (am.clone(), n, bm.clone());
        if let Some(hit) = self.products.borrow().get(&key) {
            return hit.clone();
        }
        let var = am.greatest().expect("nonconstant monomial");
        let rest = am.div_var(&var).expect("greatest variable divides");
        let g = Generator::of(&var);
        let k = var.level as i64;
        let bpoly = Polynomial::monomial(bm.clone());
        let result = if rest.is_one() {
            // (v(-k-1)1)_(n) = (-1)^k binom(n, k) v_(n-k)
            let c: C = sign::<C>(k % 2 == 1) * binom::<C>(n, k);
            if c.is_zero() {
                Polynomial::zero()
            } else {
                self.gen_mode_mono(g, n - k, bm).scale(&c)
            }
        } else {
            let wr = monomial_weight(&rest);
            let mut acc = Polynomial::zero();
            let mut j = 0;
            while wr + wb - (n + j) > 0 {
                let inner = self.mode_mono(&rest, n + j, bm);
                if !inner.is_zero() {
                    let c = binom::<C>(k + j, j);
                    acc.add_scaled(&self.gen_mode_poly(g, -k - 1 - j, &inner), &c);
                }
                j += 1;
            }
            let rest_poly = Polynomial::monomial(rest.clone());
            let s: C = sign::<C>((k + 1) % 2 == 1);
            for j in 0..=(g.weight() + wb - 1).max(-1) {
                let inner = self.gen_mode_poly(g, j, &bpoly);
                if !inner.is_zero() {
                    let c = -(s.clone() * binom::<C>(k + j, j));
                    acc.add_scaled(&self.mode_poly(&rest_poly, n - k - 1 - j, &inner), &c);
                }
            }
            acc
        };
        self.products.borrow_mut().insert(key, result.clone());
        result
    }

    pub(crate) fn gen_mode_poly(&self, g: Generator, m: i64, p: &Polynomial<C>) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (bm, c) in p.terms() {
            out.add_scaled(&self.gen_mode_mono(g, m, bm), c);
        }
        out
    }

    /// A single generator mode `g(m)` applied to a monomial state.
    fn gen_mode_mono(&self, g: Generator, m: i64, bm: &Monomial) -> Polynomial<C> {
        match g {
            Generator::Beta(i) => {
                if m < 0 {
                    Polynomial::monomial(bm.mul_var(VarId::beta(i, (-m - 1) as u32)))
                } else {
                    Polynomial::monomial(bm.clone()).partial(&VarId::gamma(i, m as u32))
                }
            }
            Generator::Gamma(i) => {
                if m < 0 {
                    Polynomial::monomial(bm.mul_var(VarId::gamma(i, (-m - 1) as u32)))
                } else {
                    -Polynomial::monomial(bm.clone()).partial(&VarId::beta(i, m as u32))
                }
            }
            Generator::Current(a) => {
                if m < 0 {
                    self.create(VarId::current(a, (-m - 1) as u32), bm)
                } else {
                    self.annihilate(a, m, bm)
                }
            }
        }
    }

    fn create_poly(&self, cv: VarId, p: &Polynomial<C>) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out.add_scaled(&self.create(cv, m), c);
        }
        out
    }

    /// `u_a(-k-1)` applied to an ordered current monomial, re-ordered so the
    /// greatest variable is leftmost.
    fn create(&self, cv: VarId, bm: &Monomial) -> Polynomial<C> {
        let g = match bm.greatest() {
            Some(g) if g > cv => g,
            _ => return Polynomial::monomial(bm.mul_var(cv)),
        };
        let key = (cv, bm.clone());
        if let Some(hit) = self.creations.borrow().get(&key) {
            return hit.clone();
        }
        let rest = bm.div_var(&g).expect("greatest variable divides");
        let inner = self.create(cv, &rest);
        let mut out = self.create_poly(g, &inner);
        let (a, b) = (cv.index as usize, g.index as usize);
        let level = cv.level + g.level + 1;
        let rest_poly = Polynomial::monomial(rest);
        for d in 0..self.algebra.dim {
            let f = &self.algebra.structure[a][b][d];
            if !f.is_zero() {
                out.add_scaled(&self.create_poly(VarId::current(d, level), &rest_poly), f);
            }
        }
        self.creations.borrow_mut().insert(key, out.clone());
        out
    }

    /// `u_a(m)`, `m >= 0`, applied to an ordered current monomial.
    fn annihilate(&self, a: usize, m: i64, bm: &Monomial) -> Polynomial<C> {
        let Some(g) = bm.greatest() else { return Polynomial::zero() };
        let key = (a, m, bm.clone());
        if let Some(hit) = self.annihilations.borrow().get(&key) {
            return hit.clone();
        }
        let rest = bm.div_var(&g).expect("greatest variable divides");
        let inner = self.annihilate(a, m, &rest);
        let mut out = self.create_poly(g, &inner);
        let b = g.index as usize;
        let l = g.level as i64;
        let shifted = m - l - 1;
        for d in 0..self.algebra.dim {
            let f = &self.algebra.structure[a][b][d];
            if f.is_zero() {
                continue;
            }
            let img = if shifted < 0 {
                self.create(VarId::current(d, (-shifted - 1) as u32), &rest)
            } else {
                self.annihilate(d, shifted, &rest)
            };
            out.add_scaled(&img, f);
        }
        if m == l + 1 {
            let c = C::from_i64(m) * self.algebra.form[a][b].clone();
            out.add_term(rest, c);
        }
        self.annihilations.borrow_mut().insert(key, out.clone());
        out
    }
}
