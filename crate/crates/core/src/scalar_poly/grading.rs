use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::scalar::Scalar;
use super::var::{Family, VarId};

/// An additive integer grading given by a weight on each variable.
#[derive(Clone)]
pub struct GradingDescriptor {
    pub name: String,
    weight_of: Arc<dyn Fn(&VarId) -> i64 + Send + Sync>,
}

impl fmt::Debug for GradingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradingDescriptor").field("name", &self.name).finish()
    }
}

impl GradingDescriptor {
    pub fn new(name: impl Into<String>, weight_of: impl Fn(&VarId) -> i64 + Send + Sync + 'static) -> Self {
        GradingDescriptor { name: name.into(), weight_of: Arc::new(weight_of) }
    }

    /// Every variable has weight 1.
    pub fn degree() -> Self {
        Self::new("degree", |_| 1)
    }

    /// The level subscript `k` of each variable.
    pub fn level() -> Self {
        Self::new("level", |v| v.level as i64)
    }

    /// Conformal weight of creation modes: beta(-k-1) and u(-k-1) have
    /// weight k+1, gamma(-k-1) has weight k.
    pub fn conformal_weight() -> Self {
        Self::new("weight", |v| match v.family {
            Family::BetaMode | Family::CurrentMode => v.level as i64 + 1,
            _ => v.level as i64,
        })
    }

    /// Degree in the variables of one family and basis index.
    pub fn family_degree(family: Family, index: u16) -> Self {
        Self::new(format!("deg_{family:?}_{index}"), move |v| (v.family == family && v.index == index) as i64)
    }

    pub fn weight(&self, v: &VarId) -> i64 {
        (self.weight_of)(v)
    }

    pub fn of_monomial(&self, m: &Monomial) -> i64 {
        m.factors().iter().map(|(v, e)| self.weight(v) * *e as i64).sum()
    }
}

/// Splits `p` into homogeneous components.
pub fn grade_components<C: Scalar>(p: &Polynomial<C>, g: &GradingDescriptor) -> BTreeMap<i64, Polynomial<C>> {
    let mut out: BTreeMap<i64, Polynomial<C>> = BTreeMap::new();
    for (m, c) in p.terms() {
        out.entry(g.of_monomial(m)).or_default().add_term(m.clone(), c.clone());
    }
    out
}

/// The common grade of a homogeneous polynomial; `None` for zero or mixed.
pub fn homogeneous_grade<C: Scalar>(p: &Polynomial<C>, g: &GradingDescriptor) -> Option<i64> {
    let mut grades = p.monomials().map(|m| g.of_monomial(m));
    let first = grades.next()?;
    grades.all(|x| x == first).then_some(first)
}
