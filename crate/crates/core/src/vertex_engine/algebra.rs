use crate::error::{Error, Result};
use crate::scalar_poly::{Family, Scalar, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// The beta-gamma system S(V) on an n-dimensional V.
    GhostSystem,
    /// The current algebra O(g, B).
    CurrentAlgebra,
}

/// The data defining one of the two kinds of vertex algebra.
///
/// For the ghost system the pairing is the canonical one and `form`,
/// `structure` are empty. For a current algebra, `structure[a][b][c]` is the
/// coefficient of `u_c` in `[u_a, u_b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec<C> {
    pub kind: AlgebraKind,
    pub dim: usize,
    pub form: Vec<Vec<C>>,
    pub structure: Vec<Vec<Vec<C>>>,
}

/// A generating field: beta^{x_i}, gamma^{x'_i} or u_a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Beta(usize),
    Gamma(usize),
    Current(usize),
}

impl Generator {
    pub fn of(v: &VarId) -> Generator {
        match v.family {
            Family::BetaMode => Generator::Beta(v.index as usize),
            Family::GammaMode => Generator::Gamma(v.index as usize),
            Family::CurrentMode => Generator::Current(v.index as usize),
            f => panic!("{f:?} is not a creation-mode family"),
        }
    }

    pub fn weight(self) -> i64 {
        match self {
            Generator::Gamma(_) => 0,
            _ => 1,
        }
    }

    /// The creation variable for mode `-k-1`.
    pub fn mode_var(self, k: u32) -> VarId {
        match self {
            Generator::Beta(i) => VarId::beta(i, k),
            Generator::Gamma(i) => VarId::gamma(i, k),
            Generator::Current(a) => VarId::current(a, k),
        }
    }
}

/// Conformal weight of a creation variable.
pub fn var_weight(v: &VarId) -> i64 {
    Generator::of(v).weight() + v.level as i64
}

impl<C: Scalar> AlgebraSpec<C> {
    pub fn ghost_system(dim: usize) -> Self {
        AlgebraSpec { kind: AlgebraKind::GhostSystem, dim, form: Vec::new(), structure: Vec::new() }
    }

    /// A current algebra; checks symmetry and invariance of the form,
    /// antisymmetry and the Jacobi identity.
    pub fn current_algebra(form: Vec<Vec<C>>, structure: Vec<Vec<Vec<C>>>) -> Result<Self> {
        let dim = form.len();
        let square = |m: &Vec<Vec<C>>| m.len() == dim && m.iter().all(|r| r.len() == dim);
        if !square(&form) || structure.len() != dim || !structure.iter().all(square) {
            return Err(Error::InvalidSpec("form and structure constants must be dim x dim (x dim)".into()));
        }
        let spec = AlgebraSpec { kind: AlgebraKind::CurrentAlgebra, dim, form, structure };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        let f = &self.structure;
        for a in 0..n {
            for b in 0..n {
                if self.form[a][b] != self.form[b][a] {
                    return Err(Error::InvalidSpec(format!("form not symmetric at ({a},{b})")));
                }
                for c in 0..n {
                    if f[a][b][c] != -f[b][a][c].clone() {
                        return Err(Error::InvalidSpec(format!("bracket not antisymmetric at ({a},{b})")));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    // [[a,b],c] + [[b,c],a] + [[c,a],b] = 0
                    for e in 0..n {
                        let mut s = C::zero();
                        for d in 0..n {
                            s = s + f[a][b][d].clone() * f[d][c][e].clone()
                                + f[b][c][d].clone() * f[d][a][e].clone()
                                + f[c][a][d].clone() * f[d][b][e].clone();
                        }
                        if !s.is_zero() {
                            return Err(Error::InvalidSpec("Jacobi identity fails".into()));
                        }
                    }
                    // B([a,b],c) = B(a,[b,c])
                    let mut l = C::zero();
                    let mut r = C::zero();
                    for d in 0..n {
                        l = l + f[a][b][d].clone() * self.form[d][c].clone();
                        r = r + f[b][c][d].clone() * self.form[a][d].clone();
                    }
                    if l != r {
                        return Err(Error::InvalidSpec("form is not invariant".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether `v` is a creation variable of this algebra.
    pub fn owns(&self, v: &VarId) -> bool {
        let family_ok = match self.kind {
            AlgebraKind::GhostSystem => matches!(v.family, Family::BetaMode | Family::GammaMode),
            AlgebraKind::CurrentAlgebra => v.family == Family::CurrentMode,
        };
        family_ok && (v.index as usize) < self.dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn sl2_structure() -> Vec<Vec<Vec<Rational>>> {
        let mut f = vec![vec![vec![q(0); 3]; 3]; 3];
        f[0][1][2] = q(1);
        f[1][0][2] = q(-1);
        f[2][0][0] = q(2);
        f[0][2][0] = q(-2);
        f[2][1][1] = q(-2);
        f[1][2][1] = q(2);
        f
    }

    #[test]
    fn accepts_sl2_with_killing_multiple() {
        let mut k = vec![vec![q(0); 3]; 3];
        k[0][1] = q(4);
        k[1][0] = q(4);
        k[2][2] = q(8);
        assert!(AlgebraSpec::current_algebra(k, sl2_structure()).is_ok());
    }

    #[test]
    fn rejects_non_invariant_form() {
        let id = (0..3).map(|i| (0..3).map(|j| q((i == j) as i64)).collect()).collect();
        assert!(AlgebraSpec::current_algebra(id, sl2_structure()).is_err());
    }

    #[test]
    fn rejects_broken_jacobi() {
        let mut f = sl2_structure();
        f[2][0][0] = q(3);
        f[0][2][0] = q(-3);
        assert!(AlgebraSpec::current_algebra(vec![vec![q(0); 3]; 3], f).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(var_weight(&VarId::beta(0, 2)), 3);
        assert_eq!(var_weight(&VarId::gamma(0, 2)), 2);
        assert_eq!(var_weight(&VarId::current(0, 0)), 1);
    }
}
