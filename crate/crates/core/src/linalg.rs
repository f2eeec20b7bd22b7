//! Dense linear algebra over a table-backed finite field.

use crate::ffield::{Fe, Field};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(k: &Field, rows: &mut [Vec<Fe>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = k.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = k.sub(*x, k.mul(f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(k: &Field, rows: &[Vec<Fe>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(k, &mut m).len()
}

/// Basis of `{x : A x = 0}` where `A` is given by its rows over `ncols` unknowns.
pub fn nullspace(k: &Field, rows: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(k, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![k.zero(); ncols];
            v[f] = k.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(m[r][f]);
            }
            v
        })
        .collect()
}

/// Affine solution set of `A x = b`: a particular solution and a nullspace
/// basis, or `None` when inconsistent.
pub fn solve(k: &Field, rows: &[Vec<Fe>], rhs: &[Fe]) -> Option<(Vec<Fe>, Vec<Vec<Fe>>)> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Fe>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut v = r.clone();
            v.push(b);
            v
        })
        .collect();
    let pivots = row_reduce(k, &mut aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![k.zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols];
    }
    Some((x, nullspace(k, rows, ncols)))
}

/// All vectors `x0 + sum c_i n_i` with `c_i` in `k`, in lexicographic order of
/// the coefficient tuple.
pub fn affine_points(k: &Field, x0: &[Fe], basis: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let elems = k.elements();
    let mut out = vec![x0.to_vec()];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for v in &out {
            for &c in &elems {
                next.push(v.iter().zip(b).map(|(&x, &y)| k.add(x, k.mul(c, y))).collect());
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(k: &Field, xs: &[i64]) -> Vec<Fe> {
        xs.iter().map(|&x| k.from_int(x)).collect()
    }

    fn apply(k: &Field, rows: &[Vec<Fe>], x: &[Fe]) -> Vec<Fe> {
        rows.iter()
            .map(|r| r.iter().zip(x).fold(k.zero(), |s, (&a, &b)| k.add(s, k.mul(a, b))))
            .collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let k = Field::of_order(5).unwrap();
        let a = vec![v(&k, &[1, 2, 3]), v(&k, &[2, 4, 6]), v(&k, &[0, 1, 1])];
        assert_eq!(rank(&k, &a), 2);
        let ns = nullspace(&k, &a, 3);
        assert_eq!(ns.len(), 1);
        assert!(apply(&k, &a, &ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_consistent_and_not() {
        let k = Field::of_order(7).unwrap();
        let a = vec![v(&k, &[1, 1]), v(&k, &[1, 6])];
        let (x, ns) = solve(&k, &a, &v(&k, &[3, 1])).unwrap();
        assert!(ns.is_empty());
        assert_eq!(apply(&k, &a, &x), v(&k, &[3, 1]));
        let b = vec![v(&k, &[1, 1]), v(&k, &[2, 2])];
        assert!(solve(&k, &b, &v(&k, &[1, 1])).is_none());
        let (x0, basis) = solve(&k, &b, &v(&k, &[1, 2])).unwrap();
        let pts = affine_points(&k, &x0, &basis);
        assert_eq!(pts.len(), 7);
        assert!(pts.iter().all(|p| apply(&k, &b, p) == v(&k, &[1, 2])));
    }

    #[test]
    fn rank_over_extension_field() {
        let k = Field::of_order(9).unwrap();
        let i = k.from_coeffs(&[0, 1]);
        let a = vec![vec![k.one(), i], vec![i, k.from_int(-1)]];
        assert_eq!(rank(&k, &a), 1);
    }
}
