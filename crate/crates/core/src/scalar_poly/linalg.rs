use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::Scalar;

/// A sparse row as `(column, value)` pairs with increasing columns.
pub type SparseRow<C> = Vec<(usize, C)>;

type IntRow<I> = Vec<(usize, I)>;

fn primitive<I: Integer + Signed + Clone>(mut row: IntRow<I>) -> IntRow<I> {
    if row.is_empty() {
        return row;
    }
    let mut g = I::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    let flip = row[0].1.is_negative();
    if !g.is_one() || flip {
        let g = if flip { -g } else { g };
        for (_, v) in row.iter_mut() {
            *v = v.clone() / g.clone();
        }
    }
    row
}

fn to_int_row<C: Scalar>(row: &[(usize, C)]) -> IntRow<C::Int> {
    let mut l = C::Int::one();
    for (_, v) in row {
        l = l.lcm(v.denom_part());
    }
    let out = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.numer_part().clone() * (l.clone() / v.denom_part().clone())))
        .collect();
    primitive(out)
}

/// `a * r - b * p`, computed sparsely.
fn combine<I: Integer + Signed + Clone>(a: &I, r: &IntRow<I>, b: &I, p: &IntRow<I>) -> IntRow<I> {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let take_r = j >= p.len() || (i < r.len() && r[i].0 < p[j].0);
        let take_p = i >= r.len() || (j < p.len() && p[j].0 < r[i].0);
        if take_r {
            out.push((r[i].0, a.clone() * r[i].1.clone()));
            i += 1;
        } else if take_p {
            out.push((p[j].0, -(b.clone() * p[j].1.clone())));
            j += 1;
        } else {
            let v = a.clone() * r[i].1.clone() - b.clone() * p[j].1.clone();
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form built incrementally with fraction-free integer row
/// operations and content removal.
#[derive(Clone, Debug)]
pub struct Echelon<C: Scalar> {
    ncols: usize,
    pivots: BTreeMap<usize, IntRow<C::Int>>,
}

impl<C: Scalar> Echelon<C> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: &[(usize, C)]) -> bool {
        let mut r = to_int_row::<C>(row);
        loop {
            let Some(&(c, ref lead)) = r.first() else { return false };
            match self.pivots.get(&c) {
                Some(p) => {
                    let pl = p[0].1.clone();
                    let g = pl.gcd(lead);
                    let a = pl / g.clone();
                    let b = lead.clone() / g;
                    r = primitive(combine(&a, &r, &b, p));
                }
                None => {
                    debug_assert!(c < self.ncols);
                    self.pivots.insert(c, r);
                    return true;
                }
            }
        }
    }

    /// Whether `row` lies in the row span.
    pub fn contains(&self, row: &[(usize, C)]) -> bool {
        let mut r = to_int_row::<C>(row);
        loop {
            let Some(&(c, ref lead)) = r.first() else { return true };
            match self.pivots.get(&c) {
                Some(p) => {
                    let pl = p[0].1.clone();
                    let g = pl.gcd(lead);
                    let a = pl / g.clone();
                    let b = lead.clone() / g;
                    r = primitive(combine(&a, &r, &b, p));
                }
                None => return false,
            }
        }
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Basis of the right kernel: one vector per non-pivot column `f`, with
    /// entry 1 at `f` and 0 at the other free columns (the reduced echelon
    /// basis).
    pub fn kernel(&self) -> Vec<SparseRow<C>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains_key(c)).collect();
        let mut out = Vec::with_capacity(free.len());
        for f in free {
            let mut x: BTreeMap<usize, C> = BTreeMap::new();
            x.insert(f, C::one());
            for (&c, row) in self.pivots.range(..f).rev() {
                let mut s = C::zero();
                for (j, v) in row.iter().skip(1) {
                    if let Some(xj) = x.get(j) {
                        s = s + C::from_int(v.clone()) * xj.clone();
                    }
                }
                if !s.is_zero() {
                    x.insert(c, -s / C::from_int(row[0].1.clone()));
                }
            }
            out.push(x.into_iter().collect());
        }
        out
    }
}

/// Right kernel of a sparse matrix with `ncols` columns.
pub fn sparse_kernel<C: Scalar>(rows: &[SparseRow<C>], ncols: usize) -> Vec<SparseRow<C>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.kernel()
}

fn dense_to_sparse<C: Scalar>(row: &[C]) -> SparseRow<C> {
    row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()
}

/// Exact right kernel of a dense matrix, as dense vectors.
pub fn rational_matrix_kernel<C: Scalar>(m: &[Vec<C>], ncols: usize) -> Vec<Vec<C>> {
    let rows: Vec<SparseRow<C>> = m.iter().map(|r| dense_to_sparse(r)).collect();
    sparse_kernel(&rows, ncols)
        .into_iter()
        .map(|v| {
            let mut d = vec![C::zero(); ncols];
            for (i, x) in v {
                d[i] = x;
            }
            d
        })
        .collect()
}

/// Exact rank by Bareiss fraction-free elimination.
pub fn matrix_rank<C: Scalar>(m: &[Vec<C>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let ncols = m[0].len();
    let mut a: Vec<Vec<C::Int>> = m
        .iter()
        .map(|r| {
            let ir = to_int_row::<C>(&dense_to_sparse(r));
            let mut d = vec![C::Int::zero(); ncols];
            for (i, v) in ir {
                d[i] = v;
            }
            d
        })
        .collect();
    let nrows = a.len();
    let mut prev = C::Int::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = a[rank][col].clone() * a[r][c].clone() - a[r][col].clone() * a[rank][c].clone();
                a[r][c] = v / prev.clone();
            }
            a[r][col] = C::Int::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<C: Scalar>(m: &[Vec<C>]) -> Option<Vec<Vec<C>>> {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { C::one() } else { C::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let inv = C::one() / a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let v = a[r][c].clone() - f.clone() * a[col][c].clone();
                    a[r][c] = v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let k = rational_matrix_kernel(&mat(&[&[1, 2], &[2, 4]]), 2);
        assert_eq!(k, vec![vec![q(-2), q(1)]]);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        assert!(rational_matrix_kernel(&mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), 3).is_empty());
        assert_eq!(rational_matrix_kernel(&mat(&[&[0, 0, 0], &[0, 0, 0]]), 3).len(), 3);
    }

    #[test]
    fn ranks() {
        assert_eq!(matrix_rank(&mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(matrix_rank(&mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
        assert_eq!(matrix_rank(&mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(matrix_rank(&mat(&[&[0, 2, 4], &[1, 1, 1], &[1, 2, 3]])), 2);
    }

    #[test]
    fn fractional_entries() {
        let m = vec![vec![Rational::frac(1, 2), Rational::frac(1, 3)], vec![q(3), q(2)]];
        assert_eq!(matrix_rank(&m), 1);
        let k = rational_matrix_kernel(&m, 2);
        assert_eq!(k, vec![vec![Rational::frac(-2, 3), q(1)]]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, mat(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&mat(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn membership_in_row_span() {
        let mut e = Echelon::<Rational>::new(3);
        assert!(e.insert(&[(0, q(1)), (1, q(1))]));
        assert!(!e.insert(&[(0, q(2)), (1, q(2))]));
        assert!(e.contains(&[(0, q(-3)), (1, q(-3))]));
        assert!(!e.contains(&[(2, q(1))]));
    }
}
