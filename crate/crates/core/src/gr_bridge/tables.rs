use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar_poly::{inverse, Family, Scalar, VarId};
use crate::structures::LieRepSpec;
use crate::{Poly, Rational};

/// Operators with closed-form actions on the graded generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableOp {
    Theta(usize),
    VH,
    VX,
    VY,
}

/// `c^n_k = k (k-1) ... (k-n+1)`, zero for `n > k`.
pub fn falling_factorial(k: u32, n: u32) -> Rational {
    if n > k {
        return Rational::zero();
    }
    (0..n).fold(Rational::one(), |acc, i| acc * Rational::from_i64((k - i) as i64))
}

fn image(family: Family, level: u32, coeffs: impl IntoIterator<Item = (usize, Rational)>, scale: &Rational) -> Poly {
    let mut p = Poly::zero();
    for (i, c) in coeffs {
        let v = VarId { family, index: i as u16, level, extra: 0 };
        p.add_term(crate::Monomial::var(v), c * scale);
    }
    p
}

fn check_var(spec: &LieRepSpec, v: &VarId) -> Result<()> {
    if !matches!(v.family, Family::GrBeta | Family::GrGamma) || v.index as usize >= spec.rep_dim() {
        return Err(Error::Precondition(format!("{v} is not a graded generator of this space")));
    }
    Ok(())
}

fn theta_image(spec: &LieRepSpec, a: usize, v: &VarId, level: u32, c: &Rational) -> Poly {
    let j = v.index as usize;
    let n = spec.rep_dim();
    let rho = &spec.rho[a];
    match v.family {
        Family::GrBeta => image(Family::GrBeta, level, (0..n).map(|i| (i, rho[i][j].clone())), c),
        _ => image(Family::GrGamma, level, (0..n).map(|i| (i, -rho[j][i].clone())), c),
    }
}

/// The actions as printed: `theta^u(n)(beta^x_k) = c beta^{rho(u)x}_{k-n}`,
/// `theta^u(n)(gamma^{x'}_k) = c gamma^{rho*(u)x'}_{k-n}`,
/// `v^h(n)(beta_k) = -c beta_{k-n}`, `v^h(n)(gamma_k) = c gamma_{k-n}`,
/// `v^x(n)(beta_k) = -c/2 gamma_{k-n}` and `v^y(n)(gamma_k) = -c/2 beta_{k-n}`.
/// The `v^x`, `v^y` rows presuppose an orthonormal basis; the `v^y` row
/// carries a primed superscript on beta, read here as unprimed.
pub fn printed_table(spec: &LieRepSpec, op: TableOp, n: u32, v: &VarId) -> Result<Poly> {
    check_var(spec, v)?;
    let c = falling_factorial(v.level, n);
    if c.is_zero() {
        return Ok(Poly::zero());
    }
    let level = v.level - n;
    let i = v.index as usize;
    let beta = v.family == Family::GrBeta;
    let half = Rational::frac(-1, 2) * &c;
    Ok(match op {
        TableOp::Theta(a) => theta_image(spec, a, v, level, &c),
        TableOp::VH if beta => image(Family::GrBeta, level, [(i, -Rational::one())], &c),
        TableOp::VH => image(Family::GrGamma, level, [(i, Rational::one())], &c),
        TableOp::VX | TableOp::VY if !spec.orthonormal => {
            return Err(Error::Precondition("the printed v^x, v^y actions need an orthonormal basis".into()))
        }
        TableOp::VX if beta => image(Family::GrGamma, level, [(i, Rational::one())], &half),
        TableOp::VY if !beta => image(Family::GrBeta, level, [(i, Rational::one())], &half),
        TableOp::VX | TableOp::VY => Poly::zero(),
    })
}

/// The actions derived from the vertex algebra structure for an arbitrary
/// invariant form `G`: `v^x(n)(beta^{x_l}_k) = -c sum_j G_{lj} gamma^{x'_j}_{k-n}`,
/// `v^y(n)(gamma^{x'_l}_k) = -c sum_j (G^-1)_{lj} beta^{x_j}_{k-n}`; the
/// other rows agree with [`printed_table`].
pub fn corrected_table(spec: &LieRepSpec, op: TableOp, n: u32, v: &VarId) -> Result<Poly> {
    check_var(spec, v)?;
    if !matches!(op, TableOp::VX | TableOp::VY) {
        let mut s = spec.clone();
        s.orthonormal = false;
        return printed_table(&s, op, n, v);
    }
    let g = spec.form.as_ref().ok_or(Error::MissingForm)?;
    let c = -falling_factorial(v.level, n);
    if c.is_zero() {
        return Ok(Poly::zero());
    }
    let level = v.level - n;
    let l = v.index as usize;
    let dim = spec.rep_dim();
    Ok(match (op, v.family) {
        (TableOp::VX, Family::GrBeta) => image(Family::GrGamma, level, (0..dim).map(|j| (j, g[l][j].clone())), &c),
        (TableOp::VY, Family::GrGamma) => {
            let ginv = inverse(g).ok_or_else(|| Error::InvalidSpec("form on V is degenerate".into()))?;
            image(Family::GrBeta, level, (0..dim).map(|j| (j, ginv[l][j].clone())), &c)
        }
        _ => Poly::zero(),
    })
}
