//! Gauss-Jordan elimination over `K = Q(params)`.

use num_traits::Zero;

use crate::exact_arith::{BigRat, RatFun};

/// Reduced row echelon form; pivots are chosen at the lowest column index.
/// Returns the nonzero rows and their pivot columns.
pub fn rref(mut m: Vec<Vec<RatFun>>, ncols: usize) -> (Vec<Vec<RatFun>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let prow = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for c in col..ncols {
                if !prow[c].is_zero() {
                    other[c] = &other[c] - &(&f * &prow[c]);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m, pivots)
}

/// Basis of `{v : M v = 0}`, one vector per free column in increasing order.
pub fn nullspace(m: Vec<Vec<RatFun>>, ncols: usize, nvars: usize) -> Vec<Vec<RatFun>> {
    let (r, pivots) = rref(m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![RatFun::zero(nvars); ncols];
            v[f] = RatFun::one(nvars);
            for (row, &p) in r.iter().zip(&pivots) {
                if !row[f].is_zero() {
                    v[p] = -&row[f];
                }
            }
            v
        })
        .collect()
}

/// Canonical basis of the span of `vs`: the nonzero rows of its RREF.
pub fn canonical_span(vs: Vec<Vec<RatFun>>, ncols: usize) -> Vec<Vec<RatFun>> {
    rref(vs, ncols).0
}

/// A rational solution of `sum_i x_i cols[i] = rhs` for integer data
/// (columns shorter than `rhs` are zero-padded).
pub fn solve_integer_system(cols: &[Vec<i32>], rhs: &[i32]) -> Option<Vec<BigRat>> {
    let rows = rhs.len().max(cols.iter().map(|c| c.len()).max().unwrap_or(0));
    let n = cols.len();
    let at = |v: &[i32], r: usize| BigRat::from_integer(v.get(r).copied().unwrap_or(0).into());
    let mut m: Vec<Vec<BigRat>> = (0..rows).map(|r| (0..n).map(|c| at(&cols[c], r)).chain([at(rhs, r)]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=n {
                    let t = &f * &m[row][c];
                    m[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRat::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = m[r][n].clone();
    }
    Some(sol)
}
