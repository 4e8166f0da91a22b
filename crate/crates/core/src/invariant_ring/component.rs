use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar_poly::{Echelon, Monomial, SparseRow, VarId};
use crate::{Poly, Rational};

/// A constraint on one grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Exact(u32),
    AtMost(u32),
    Any,
}

impl Bound {
    fn admits(self, v: u32) -> bool {
        match self {
            Bound::Exact(x) => v == x,
            Bound::AtMost(x) => v <= x,
            Bound::Any => true,
        }
    }

    fn cap(self) -> Option<u32> {
        match self {
            Bound::Exact(x) | Bound::AtMost(x) => Some(x),
            Bound::Any => None,
        }
    }
}

/// A graded piece of `P_N`, the polynomial ring on `beta_k`, `gamma_k` with
/// `k <= truncation` over a `dim`-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSpec {
    pub dim: usize,
    pub truncation: u32,
    pub level: Bound,
    pub degree: Bound,
    /// Degrees in `W^1 = (beta^x, gamma^{y'})`, `W^2 = (beta^y, gamma^{x'})`,
    /// `W^3 = (beta^h, gamma^{h'})`; only meaningful for `dim = 3`.
    pub w_degree: Option<[u32; 3]>,
}

impl ComponentSpec {
    pub fn new(dim: usize, truncation: u32, level: Bound, degree: Bound) -> Self {
        ComponentSpec { dim, truncation, level, degree, w_degree: None }
    }

    pub fn variables(&self) -> Vec<VarId> {
        crate::gr_bridge::gr_variables(self.dim, self.truncation)
    }

    /// Whether only upper bounds are used, so the selection is stable under
    /// operators that never raise level or degree.
    pub fn is_closed(&self) -> bool {
        !matches!(self.level, Bound::Exact(_)) && !matches!(self.degree, Bound::Exact(_)) && self.w_degree.is_none()
    }
}

/// The `W^i` module containing a graded generator of `P` for `sl(2)` acting
/// on itself (basis `x, y, h`).
pub fn w_module(v: &VarId) -> usize {
    use crate::scalar_poly::Family::*;
    match (v.family, v.index) {
        (GrBeta, 0) | (GrGamma, 1) => 0,
        (GrBeta, 1) | (GrGamma, 0) => 1,
        _ => 2,
    }
}

/// Monomials of `P_N` satisfying `spec`, ordered by degree and then by the
/// canonical monomial order.
pub fn enumerate_monomials(spec: &ComponentSpec) -> Result<Vec<Monomial>> {
    let deg_cap = spec
        .degree
        .cap()
        .ok_or_else(|| Error::Unbounded("a degree bound is required when level-0 variables are present".into()))?;
    if spec.w_degree.is_some() && spec.dim != 3 {
        return Err(Error::InvalidSpec("W-degrees need the three-dimensional space".into()));
    }
    let vars = spec.variables();
    let level_cap = spec.level.cap().unwrap_or(u32::MAX);
    let mut out = Vec::new();
    let mut current: Vec<(VarId, u32)> = Vec::new();
    rec(&vars, 0, deg_cap, level_cap, &mut current, &mut |m: &[(VarId, u32)]| {
        let deg: u32 = m.iter().map(|(_, e)| e).sum();
        let lev: u32 = m.iter().map(|(v, e)| v.level * e).sum();
        if !spec.degree.admits(deg) || !spec.level.admits(lev) {
            return;
        }
        if let Some(w) = spec.w_degree {
            let mut got = [0u32; 3];
            for (v, e) in m {
                got[w_module(v)] += e;
            }
            if got != w {
                return;
            }
        }
        out.push(Monomial::from_pairs(m.iter().copied()));
    });
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    Ok(out)
}

type Emit<'a> = dyn FnMut(&[(VarId, u32)]) + 'a;

fn rec(
    vars: &[VarId],
    i: usize,
    deg_left: u32,
    lev_left: u32,
    current: &mut Vec<(VarId, u32)>,
    emit: &mut Emit<'_>,
) {
    if i == vars.len() {
        emit(current);
        return;
    }
    let v = vars[i];
    rec(vars, i + 1, deg_left, lev_left, current, emit);
    let mut e = 1;
    while e <= deg_left && (v.level == 0 || v.level * e <= lev_left) {
        current.push((v, e));
        rec(vars, i + 1, deg_left - e, lev_left.saturating_sub(v.level * e), current, emit);
        current.pop();
        e += 1;
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Joint kernel of linear maps given by the images of each basis monomial.
///
/// `images(m)` lists the images of `m` under every operator. The columns are
/// split into independent blocks (columns sharing an output coordinate) and
/// each block is eliminated separately.
pub struct JointKernel {
    pub columns: Vec<Monomial>,
    pub rank: usize,
    pub basis: Vec<SparseRow<Rational>>,
}

impl JointKernel {
    pub fn dim(&self) -> usize {
        self.columns.len() - self.rank
    }

    pub fn polynomials(&self) -> Vec<Poly> {
        self.basis
            .iter()
            .map(|v| Poly::from_terms(v.iter().map(|(c, x)| (self.columns[*c].clone(), x.clone()))))
            .collect()
    }
}

pub fn joint_kernel(
    columns: Vec<Monomial>,
    images: &mut dyn FnMut(&Monomial) -> Result<Vec<Poly>>,
    want_basis: bool,
) -> Result<JointKernel> {
    let n = columns.len();
    let mut rows: HashMap<(usize, Monomial), Vec<(usize, Rational)>> = HashMap::new();
    for (col, m) in columns.iter().enumerate() {
        for (op, img) in images(m)?.into_iter().enumerate() {
            for (t, c) in img.into_terms() {
                rows.entry((op, t)).or_default().push((col, c));
            }
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for r in rows.values() {
        let first = find(&mut parent, r[0].0);
        for (c, _) in r.iter().skip(1) {
            let root = find(&mut parent, *c);
            if root != first {
                parent[root] = first;
            }
        }
    }
    let mut block_of: HashMap<usize, Vec<usize>> = HashMap::new();
    for c in 0..n {
        let root = find(&mut parent, c);
        block_of.entry(root).or_default().push(c);
    }
    let mut block_rows: HashMap<usize, Vec<Vec<(usize, Rational)>>> = HashMap::new();
    let mut keyed: Vec<_> = rows.into_iter().collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    for (_, mut r) in keyed {
        r.sort_by_key(|(c, _)| *c);
        let root = find(&mut parent, r[0].0);
        block_rows.entry(root).or_default().push(r);
    }
    let mut roots: Vec<usize> = block_of.keys().copied().collect();
    roots.sort_unstable();
    let mut rank = 0;
    let mut basis = Vec::new();
    for root in roots {
        let cols = &block_of[&root];
        let local: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut e: Echelon<Rational> = Echelon::new(cols.len());
        for r in block_rows.get(&root).map(Vec::as_slice).unwrap_or(&[]) {
            let lr: Vec<(usize, Rational)> = r.iter().map(|(c, x)| (local[c], x.clone())).collect();
            e.insert(&lr);
        }
        rank += e.rank();
        if want_basis {
            for v in e.kernel() {
                basis.push(v.into_iter().map(|(i, x)| (cols[i], x)).collect());
            }
        }
    }
    basis.sort();
    Ok(JointKernel { columns, rank, basis })
}
