use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};


use super::monomial::Monomial;
use super::scalar::Scalar;
use super::var::{Universe, VarId};
use crate::error::{Error, Result};

/// A sparse polynomial with exact coefficients. Zero coefficients are never
/// stored, so structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial<C> {
    terms: BTreeMap<Monomial, C>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl<C: Scalar> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(C::from_i64(c))
    }

    pub fn var(v: VarId) -> Self {
        Self::term(Monomial::var(v), C::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, C)> {
        self.terms.into_iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including 0).
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Polynomial<C>, c: &C) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a.clone() * c.clone());
        }
    }

    /// `self += c * m * other`.
    pub fn add_scaled_shifted(&mut self, other: &Polynomial<C>, c: &C, m: &Monomial) {
        if c.is_zero() {
            return;
        }
        for (om, a) in &other.terms {
            self.add_term(om.mul(m), a.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial { terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect() }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    /// The single universe of all variables, `None` for constants.
    pub fn universe(&self) -> Result<Option<Universe>> {
        let mut found: Option<Universe> = None;
        for v in self.terms.keys().flat_map(|m| m.vars()) {
            let u = v.universe();
            match found {
                None => found = Some(u),
                Some(f) if f != u => {
                    return Err(Error::UniverseMismatch(format!("{f:?}"), format!("{u:?}")))
                }
                _ => {}
            }
        }
        Ok(found)
    }

    /// Leading coefficient under the storage order (largest stored monomial).
    pub fn last_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn partial(&self, v: &VarId) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                let q = m.div_var(v).expect("exponent checked");
                out.add_term(q, c.clone() * C::from_i64(e as i64));
            }
        }
        out
    }

    pub fn substitute(&self, map: &dyn Fn(&VarId) -> Option<Polynomial<C>>) -> Self {
        let mut cache: HashMap<VarId, Polynomial<C>> = HashMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            for &(v, e) in m.factors() {
                let img = cache
                    .entry(v)
                    .or_insert_with(|| map(&v).unwrap_or_else(|| Self::var(v)))
                    .clone();
                for _ in 0..e {
                    acc = &acc * &img;
                }
            }
            out += &acc;
        }
        out
    }

    pub fn evaluate(&self, values: &dyn Fn(&VarId) -> C) -> C {
        let mut total = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = values(&v);
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            total = total + t;
        }
        total
    }

    pub fn map_monomials<F: Fn(&Monomial) -> Monomial>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    /// Divides by the coefficient of the largest stored monomial.
    pub fn make_monic_by(&self, lead: &C) -> Self {
        self.scale(&(C::one() / lead.clone()))
    }

    /// Canonical text: terms by descending total degree, then ascending
    /// monomial order; coefficients as `p/q`.
    pub fn render(&self, names: Option<&[String]>) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut items: Vec<(&Monomial, &C)> = self.terms.iter().collect();
        items.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        let mut out = String::new();
        for (idx, (m, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&m.render(names));
            } else {
                out.push_str(&format!("{}*{}", abs, m.render(names)));
            }
        }
        out
    }
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

/// Checked arithmetic that refuses to combine different variable universes.
pub fn poly_arith<C: Scalar>(a: &Polynomial<C>, b: &Polynomial<C>, op: ArithOp) -> Result<Polynomial<C>> {
    if let (Some(ua), Some(ub)) = (a.universe()?, b.universe()?) {
        if ua != ub {
            return Err(Error::UniverseMismatch(format!("{ua:?}"), format!("{ub:?}")));
        }
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    })
}

/// Extends variable images to a derivation by the Leibniz rule. Variables
/// without a rule are sent to zero.
pub fn apply_derivation<C: Scalar>(rules: &HashMap<VarId, Polynomial<C>>, p: &Polynomial<C>) -> Polynomial<C> {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        for &(v, e) in m.factors() {
            let Some(img) = rules.get(&v) else { continue };
            if img.is_zero() {
                continue;
            }
            let rest = m.div_var(&v).expect("variable present");
            let coef = c.clone() * C::from_i64(e as i64);
            out.add_scaled_shifted(img, &coef, &rest);
        }
    }
    out
}

impl<C: Scalar> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Polynomial<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Scalar> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<C: Scalar> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (m, c) in &rhs.terms {
            out.add_scaled_shifted(self, c, m);
        }
        out
    }
}

impl<C: Scalar> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl<C: Scalar> Add for Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(mut self, rhs: Self) -> Polynomial<C> {
        self += &rhs;
        self
    }
}

impl<C: Scalar> Sub for Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(mut self, rhs: Self) -> Polynomial<C> {
        self -= &rhs;
        self
    }
}

impl<C: Scalar> Mul for Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        &self * &rhs
    }
}

impl<C: Scalar> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

impl<'a, C: Scalar> AddAssign<&'a Polynomial<C>> for Polynomial<C> {
    fn add_assign(&mut self, rhs: &'a Polynomial<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a, C: Scalar> SubAssign<&'a Polynomial<C>> for Polynomial<C> {
    fn sub_assign(&mut self, rhs: &'a Polynomial<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}
