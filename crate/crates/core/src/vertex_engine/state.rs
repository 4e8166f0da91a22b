use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::algebra::{var_weight, AlgebraSpec, Generator};
use crate::error::{Error, Result};
use crate::scalar_poly::{Monomial, Polynomial, Scalar, VarId};

/// An element of the state space: a polynomial in creation variables.
///
/// For current algebras each monomial denotes the ordered product with the
/// greatest variable applied last (leftmost), acting on the vacuum.
#[derive(Clone, Debug)]
pub struct State<C> {
    pub algebra: Arc<AlgebraSpec<C>>,
    pub value: Polynomial<C>,
}

impl<C: Scalar> PartialEq for State<C> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && same_algebra(&self.algebra, &other.algebra)
    }
}

impl<C: Scalar> Eq for State<C> {}

pub(crate) fn same_algebra<C: Scalar>(a: &Arc<AlgebraSpec<C>>, b: &Arc<AlgebraSpec<C>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn monomial_weight(m: &Monomial) -> i64 {
    m.factors().iter().map(|(v, e)| var_weight(v) * *e as i64).sum()
}

impl<C: Scalar> State<C> {
    pub fn new(algebra: Arc<AlgebraSpec<C>>, value: Polynomial<C>) -> Result<Self> {
        if let Some(v) = value.vars().into_iter().find(|v| !algebra.owns(v)) {
            return Err(Error::InvalidSpec(format!("variable {v} does not belong to this algebra")));
        }
        Ok(State { algebra, value })
    }

    pub(crate) fn from_raw(algebra: Arc<AlgebraSpec<C>>, value: Polynomial<C>) -> Self {
        State { algebra, value }
    }

    pub fn vacuum(algebra: &Arc<AlgebraSpec<C>>) -> Self {
        Self::from_raw(algebra.clone(), Polynomial::one())
    }

    pub fn zero(algebra: &Arc<AlgebraSpec<C>>) -> Self {
        Self::from_raw(algebra.clone(), Polynomial::zero())
    }

    /// `g(-k-1)` applied to the vacuum.
    pub fn generator(algebra: &Arc<AlgebraSpec<C>>, g: Generator, k: u32) -> Result<Self> {
        Self::new(algebra.clone(), Polynomial::var(g.mode_var(k)))
    }

    pub fn constant(algebra: &Arc<AlgebraSpec<C>>, c: C) -> Self {
        Self::from_raw(algebra.clone(), Polynomial::constant(c))
    }

    pub fn with_value(&self, value: Polynomial<C>) -> Self {
        Self::from_raw(self.algebra.clone(), value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_value(&self.value + &other.value))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_value(&self.value - &other.value))
    }

    pub fn scale(&self, c: &C) -> Self {
        self.with_value(self.value.scale(c))
    }

    /// Conformal weight; fails on inhomogeneous states. Zero has weight 0.
    pub fn weight(&self) -> Result<i64> {
        let mut ws = self.value.monomials().map(monomial_weight);
        let Some(first) = ws.next() else { return Ok(0) };
        if ws.all(|w| w == first) {
            Ok(first)
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    pub fn weight_components(&self) -> BTreeMap<i64, State<C>> {
        let mut out: BTreeMap<i64, Polynomial<C>> = BTreeMap::new();
        for (m, c) in self.value.terms() {
            out.entry(monomial_weight(m)).or_default().add_term(m.clone(), c.clone());
        }
        out.into_iter().map(|(w, p)| (w, self.with_value(p))).collect()
    }

    /// Largest number of creation variables in a monomial.
    pub fn max_degree(&self) -> u32 {
        self.value.degree().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<VarId> {
        self.value.vars().into_iter().collect()
    }
}

impl<C: Scalar> fmt::Display for State<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
