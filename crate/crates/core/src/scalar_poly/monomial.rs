use std::cmp::Ordering;
use std::fmt;

use super::var::VarId;

/// A monomial stored as `(variable, exponent)` pairs sorted by variable,
/// with no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    factors: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    pub fn power(v: VarId, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial { factors: vec![(v, e)] }
        }
    }

    /// Builds from arbitrary pairs; repeated variables are merged.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Self {
        let mut factors: Vec<(VarId, u32)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        factors.sort_by_key(|a| a.0);
        let mut merged: Vec<(VarId, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        Self::from_pairs(vars.into_iter().map(|v| (v, 1)))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.factors
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.factors.iter().map(|p| p.0)
    }

    /// Every variable repeated according to its exponent, ascending.
    pub fn expanded(&self) -> Vec<VarId> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for &(v, e) in &self.factors {
            for _ in 0..e {
                out.push(v);
            }
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, v: &VarId) -> u32 {
        match self.factors.binary_search_by(|p| p.0.cmp(v)) {
            Ok(i) => self.factors[i].1,
            Err(_) => 0,
        }
    }

    /// The greatest variable under the canonical order.
    pub fn greatest(&self) -> Option<VarId> {
        self.factors.last().map(|p| p.0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    pub fn mul_var(&self, v: VarId) -> Monomial {
        let mut factors = self.factors.clone();
        match factors.binary_search_by(|p| p.0.cmp(&v)) {
            Ok(i) => factors[i].1 += 1,
            Err(i) => factors.insert(i, (v, 1)),
        }
        Monomial { factors }
    }

    /// Removes one power of `v`; `None` if `v` does not divide.
    pub fn div_var(&self, v: &VarId) -> Option<Monomial> {
        let i = self.factors.binary_search_by(|p| p.0.cmp(v)).ok()?;
        let mut factors = self.factors.clone();
        if factors[i].1 == 1 {
            factors.remove(i);
        } else {
            factors[i].1 -= 1;
        }
        Some(Monomial { factors })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        let mut j = 0;
        for &(v, e) in &self.factors {
            while j < other.factors.len() && other.factors[j].0 < v {
                j += 1;
            }
            if j == other.factors.len() || other.factors[j].0 != v || other.factors[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let factors = other
            .factors
            .iter()
            .filter_map(|&(v, e)| {
                let r = e - self.exponent(&v);
                (r > 0).then_some((v, r))
            })
            .collect();
        Some(Monomial { factors })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1.max(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.vars().all(|v| other.exponent(&v) == 0)
    }

    pub fn map_vars<F: Fn(VarId) -> VarId>(&self, f: F) -> Monomial {
        Monomial::from_pairs(self.factors.iter().map(|&(v, e)| (f(v), e)))
    }

    pub fn render(&self, names: Option<&[String]>) -> String {
        if self.is_one() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    v.render(names)
                } else {
                    format!("{}^{}", v.render(names), e)
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}
