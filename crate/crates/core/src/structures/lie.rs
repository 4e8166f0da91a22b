use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar_poly::{inverse, Scalar};
use crate::Rational;

pub type Matrix = Vec<Vec<Rational>>;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![Rational::zero(); c]; r]
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m, p) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = zeros(n, p);
    for i in 0..n {
        for k in 0..m {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] = out[i][j].clone() + a[i][k].clone() * b[k][j].clone();
            }
        }
    }
    out
}

fn transpose(a: &Matrix) -> Matrix {
    let c = a.first().map_or(0, Vec::len);
    (0..c).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

fn trace(a: &Matrix) -> Rational {
    (0..a.len()).fold(Rational::zero(), |s, i| s + a[i][i].clone())
}

fn sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect()).collect()
}

/// A finite-dimensional Lie algebra with a representation on V.
///
/// `structure[a][b][c]` is the coefficient of `u_c` in `[u_a, u_b]`;
/// `rho[a][i][j]` is the `x_i` coefficient of `rho(u_a) x_j`, so column `j`
/// is the image of `x_j`. `form` is an optional symmetric invariant Gram
/// matrix on V.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieRepSpec {
    pub name: String,
    pub lie_names: Vec<String>,
    pub rep_names: Vec<String>,
    pub structure: Vec<Vec<Vec<Rational>>>,
    pub rho: Vec<Matrix>,
    pub form: Option<Matrix>,
    pub orthonormal: bool,
}

impl LieRepSpec {
    /// Validates dimensions, the homomorphism property of `rho`, and the
    /// symmetry and invariance of `form`.
    pub fn new(
        name: impl Into<String>,
        lie_names: Vec<String>,
        rep_names: Vec<String>,
        structure: Vec<Vec<Vec<Rational>>>,
        rho: Vec<Matrix>,
        form: Option<Matrix>,
        orthonormal: bool,
    ) -> Result<Self> {
        let spec = LieRepSpec { name: name.into(), lie_names, rep_names, structure, rho, form, orthonormal };
        spec.validate()?;
        Ok(spec)
    }

    pub fn lie_dim(&self) -> usize {
        self.lie_names.len()
    }

    pub fn rep_dim(&self) -> usize {
        self.rep_names.len()
    }

    fn validate(&self) -> Result<()> {
        let (m, n) = (self.lie_dim(), self.rep_dim());
        let bad = |s: &str| Err(Error::InvalidSpec(s.to_string()));
        if self.structure.len() != m || self.structure.iter().any(|r| r.len() != m || r.iter().any(|c| c.len() != m)) {
            return bad("structure constants must be m x m x m");
        }
        if self.rho.len() != m || self.rho.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
            return bad("representation matrices must be n x n, one per basis element");
        }
        for a in 0..m {
            for b in 0..m {
                let comm = sub(&mat_mul(&self.rho[a], &self.rho[b]), &mat_mul(&self.rho[b], &self.rho[a]));
                let mut img = zeros(n, n);
                for c in 0..m {
                    let f = &self.structure[a][b][c];
                    if f.is_zero() {
                        continue;
                    }
                    for i in 0..n {
                        for j in 0..n {
                            img[i][j] = img[i][j].clone() + f.clone() * self.rho[c][i][j].clone();
                        }
                    }
                }
                if comm != img {
                    return bad("rho is not a Lie algebra homomorphism");
                }
            }
        }
        let trace_form = self.trace_form();
        let killing = self.killing();
        for form in [&trace_form, &killing] {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        let mut l = Rational::zero();
                        let mut r = Rational::zero();
                        for d in 0..m {
                            l += self.structure[a][b][d].clone() * form[d][c].clone();
                            r += self.structure[b][c][d].clone() * form[a][d].clone();
                        }
                        if l != r {
                            return bad("trace form is not invariant");
                        }
                    }
                }
            }
        }
        if let Some(g) = &self.form {
            if g.len() != n || g.iter().any(|r| r.len() != n) || *g != transpose(g) {
                return bad("form on V must be a symmetric n x n matrix");
            }
            for r in &self.rho {
                let lhs = mat_mul(&transpose(r), g);
                let rhs = mat_mul(g, r);
                if lhs.iter().zip(&rhs).any(|(x, y)| x.iter().zip(y).any(|(u, v)| u.clone() + v.clone() != Rational::zero())) {
                    return bad("form on V is not invariant");
                }
            }
            if self.orthonormal && *g != identity(n) {
                return bad("orthonormal flag set but the form is not the identity");
            }
        } else if self.orthonormal {
            return bad("orthonormal flag set without a form");
        }
        Ok(())
    }

    /// `ad(u_a)` as a matrix: column `b` is `[u_a, u_b]`.
    pub fn ad(&self, a: usize) -> Matrix {
        let m = self.lie_dim();
        let mut out = zeros(m, m);
        for b in 0..m {
            for c in 0..m {
                out[c][b] = self.structure[a][b][c].clone();
            }
        }
        out
    }

    /// Killing form `K(u_a, u_b) = Tr(ad u_a ad u_b)`.
    pub fn killing(&self) -> Matrix {
        let m = self.lie_dim();
        let ads: Vec<Matrix> = (0..m).map(|a| self.ad(a)).collect();
        (0..m).map(|a| (0..m).map(|b| trace(&mat_mul(&ads[a], &ads[b]))).collect()).collect()
    }

    /// `B(u_a, u_b) = -Tr(rho(u_a) rho(u_b))`.
    pub fn trace_form(&self) -> Matrix {
        let m = self.lie_dim();
        (0..m).map(|a| (0..m).map(|b| -trace(&mat_mul(&self.rho[a], &self.rho[b]))).collect()).collect()
    }

    /// The scalar `lambda` with `B = lambda K`; fails if none exists or `K`
    /// is degenerate.
    pub fn level(&self) -> Result<Rational> {
        let k = self.killing();
        if inverse(&k).is_none() {
            return Err(Error::InvalidSpec("Killing form is degenerate".into()));
        }
        let b = self.trace_form();
        let (a0, b0) = (0..self.lie_dim())
            .flat_map(|a| (0..self.lie_dim()).map(move |b| (a, b)))
            .find(|&(a, b)| !k[a][b].is_zero())
            .expect("nondegenerate form has a nonzero entry");
        let lambda = b[a0][b0].clone() / k[a0][b0].clone();
        for a in 0..self.lie_dim() {
            for c in 0..self.lie_dim() {
                if b[a][c] != lambda.clone() * k[a][c].clone() {
                    return Err(Error::InvalidSpec("trace form is not a multiple of the Killing form".into()));
                }
            }
        }
        Ok(lambda)
    }

    pub fn traceless(&self) -> bool {
        self.rho.iter().all(|r| trace(r).is_zero())
    }

    pub fn lie_index(&self, name: &str) -> Option<usize> {
        self.lie_names.iter().position(|n| n == name)
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn sl2_structure() -> Vec<Vec<Vec<Rational>>> {
    let mut f = vec![zeros(3, 3); 3];
    // basis x, y, h: [x,y] = h, [h,x] = 2x, [h,y] = -2y
    f[0][1][2] = q(1);
    f[1][0][2] = q(-1);
    f[2][0][0] = q(2);
    f[0][2][0] = q(-2);
    f[2][1][1] = q(-2);
    f[1][2][1] = q(2);
    f
}

/// sl(2) acting on itself, basis `x, y, h`, with the invariant form
/// `G(x, y) = 1/2`, `G(h, h) = 1` on V.
pub fn sl2_adjoint() -> LieRepSpec {
    let f = sl2_structure();
    let rho: Vec<Matrix> = (0..3)
        .map(|a| {
            let mut m = zeros(3, 3);
            for b in 0..3 {
                for c in 0..3 {
                    m[c][b] = f[a][b][c].clone();
                }
            }
            m
        })
        .collect();
    let mut g = zeros(3, 3);
    g[0][1] = Rational::frac(1, 2);
    g[1][0] = Rational::frac(1, 2);
    g[2][2] = q(1);
    LieRepSpec::new("sl2-adjoint", names(&["x", "y", "h"]), names(&["x", "y", "h"]), f, rho, Some(g), false)
        .expect("sl2 adjoint data is valid")
}

/// sl(2) on C^2 with basis `e1, e2`: `x e2 = e1`, `y e1 = e2`,
/// `h = diag(1, -1)`. Carries no symmetric invariant form.
pub fn sl2_standard() -> LieRepSpec {
    let x = vec![vec![q(0), q(1)], vec![q(0), q(0)]];
    let y = vec![vec![q(0), q(0)], vec![q(1), q(0)]];
    let h = vec![vec![q(1), q(0)], vec![q(0), q(-1)]];
    LieRepSpec::new("sl2-standard", names(&["x", "y", "h"]), names(&["e1", "e2"]), sl2_structure(), vec![x, y, h], None, false)
        .expect("sl2 standard data is valid")
}

/// The n-dimensional abelian Lie algebra acting trivially on C^n with the
/// standard form.
pub fn abelian(n: usize) -> LieRepSpec {
    let lie: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
    let rep: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    LieRepSpec::new(format!("abelian-{n}"), lie, rep, vec![zeros(n, n); n], vec![zeros(n, n); n], Some(identity(n)), true)
        .expect("abelian data is valid")
}

/// Resolves `sl2-adjoint`, `sl2-standard` or `abelian-<n>`.
pub fn builtin(name: &str) -> Result<LieRepSpec> {
    match name {
        "sl2-adjoint" => Ok(sl2_adjoint()),
        "sl2-standard" => Ok(sl2_standard()),
        other => match other.strip_prefix("abelian-").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if (1..=16).contains(&n) => Ok(abelian(n)),
            _ => Err(Error::InvalidSpec(format!("unknown algebra '{other}'"))),
        },
    }
}
