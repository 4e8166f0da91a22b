use std::fmt;

use serde::{Deserialize, Serialize};

/// Variable families. The declaration order is the first key of the
/// canonical variable order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// beta^{x_i}(-k-1)
    BetaMode,
    /// gamma^{x'_i}(-k-1)
    GammaMode,
    /// u_a(-k-1)
    CurrentMode,
    /// beta^{x_i}_k in the associated graded ring
    GrBeta,
    /// gamma^{x'_i}_k in the associated graded ring
    GrGamma,
    /// Q^{a,b}_{i,j}
    GrQ,
    /// T^u_m
    GrT,
    Free,
}

/// Which ring a polynomial lives in, as determined by its variable families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Universe {
    Ghost,
    Current,
    Graded,
    Relations,
    Free,
}

impl Family {
    pub fn universe(self) -> Universe {
        match self {
            Family::BetaMode | Family::GammaMode => Universe::Ghost,
            Family::CurrentMode => Universe::Current,
            Family::GrBeta | Family::GrGamma => Universe::Graded,
            Family::GrQ | Family::GrT => Universe::Relations,
            Family::Free => Universe::Free,
        }
    }
}

/// A polynomial variable.
///
/// Ordered by `(family, index, level, extra)`. For `GrQ` the index packs the
/// module pair as `10 * a + b` with `1 <= a <= b <= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId {
    pub family: Family,
    pub index: u16,
    pub level: u32,
    pub extra: u32,
}

impl VarId {
    pub const fn new(family: Family, index: u16, level: u32, extra: u32) -> Self {
        VarId { family, index, level, extra }
    }

    pub const fn beta(i: usize, k: u32) -> Self {
        Self::new(Family::BetaMode, i as u16, k, 0)
    }

    pub const fn gamma(i: usize, k: u32) -> Self {
        Self::new(Family::GammaMode, i as u16, k, 0)
    }

    pub const fn current(a: usize, k: u32) -> Self {
        Self::new(Family::CurrentMode, a as u16, k, 0)
    }

    pub const fn gr_beta(i: usize, k: u32) -> Self {
        Self::new(Family::GrBeta, i as u16, k, 0)
    }

    pub const fn gr_gamma(i: usize, k: u32) -> Self {
        Self::new(Family::GrGamma, i as u16, k, 0)
    }

    /// `Q^{a,b}_{i,j}` with 1-based module labels `a <= b`.
    pub const fn gr_q(a: u16, b: u16, i: u32, j: u32) -> Self {
        Self::new(Family::GrQ, 10 * a + b, i, j)
    }

    /// `T^u_m` with `u` in 0..3 for x, y, h.
    pub const fn gr_t(u: usize, m: u32) -> Self {
        Self::new(Family::GrT, u as u16, m, 0)
    }

    pub const fn free(i: usize) -> Self {
        Self::new(Family::Free, i as u16, 0, 0)
    }

    pub fn universe(&self) -> Universe {
        self.family.universe()
    }

    /// Module pair `(a, b)` of a `GrQ` variable.
    pub fn q_pair(&self) -> (u16, u16) {
        (self.index / 10, self.index % 10)
    }

    /// Renders with the given names for basis indices (gr families) and
    /// 1-based numbers elsewhere.
    pub fn render(&self, names: Option<&[String]>) -> String {
        let name = |i: u16| -> String {
            match names.and_then(|n| n.get(i as usize)) {
                Some(s) => s.clone(),
                None => (i + 1).to_string(),
            }
        };
        match self.family {
            Family::BetaMode => format!("b[{},{}]", self.index + 1, self.level),
            Family::GammaMode => format!("g[{},{}]", self.index + 1, self.level),
            Family::CurrentMode => format!("u[{},{}]", self.index + 1, self.level),
            Family::GrBeta => format!("b[{},{}]", name(self.index), self.level),
            Family::GrGamma => format!("g[{}',{}]", name(self.index), self.level),
            Family::GrQ => {
                let (a, b) = self.q_pair();
                format!("Q[{},{},{},{}]", a, b, self.level, self.extra)
            }
            Family::GrT => format!("T[{},{}]", t_label(self.index), self.level),
            Family::Free => format!("X[{}]", self.index),
        }
    }
}

pub(crate) fn t_label(u: u16) -> String {
    match u {
        0 => "x".into(),
        1 => "y".into(),
        2 => "h".into(),
        n => (n + 1).to_string(),
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_family_then_index_then_level() {
        assert!(VarId::beta(2, 5) < VarId::gamma(0, 0));
        assert!(VarId::gamma(0, 3) < VarId::gamma(1, 0));
        assert!(VarId::gr_q(1, 2, 0, 5) < VarId::gr_q(1, 2, 1, 0));
        assert!(VarId::gr_t(0, 0) > VarId::gr_q(3, 3, 2, 3));
    }

    #[test]
    fn rendering() {
        assert_eq!(VarId::beta(0, 0).to_string(), "b[1,0]");
        assert_eq!(VarId::gr_gamma(2, 1).to_string(), "g[3',1]");
        let names: Vec<String> = ["x", "y", "h"].iter().map(|s| s.to_string()).collect();
        assert_eq!(VarId::gr_gamma(2, 1).render(Some(&names)), "g[h',1]");
        assert_eq!(VarId::gr_q(2, 3, 1, 0).to_string(), "Q[2,3,1,0]");
        assert_eq!(VarId::gr_t(2, 4).to_string(), "T[h,4]");
    }
}
