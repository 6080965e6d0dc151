//! Dense linear algebra over a [`Field`].

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

pub type Matrix = Vec<Vec<Elem>>;

/// Determinant by expansion over column subsets: `O(n 2^n)` ring
/// operations and no division, so it works over any commutative ring.
pub fn det_by_subsets<T: Clone>(
    n: usize,
    entry: impl Fn(usize, usize) -> T,
    zero: T,
    one: T,
    add: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
    neg: impl Fn(&T) -> T,
) -> T {
    let mut dp: Vec<Option<T>> = vec![None; 1 << n];
    dp[0] = Some(one);
    for mask in 0..(1usize << n) {
        let Some(val) = dp[mask].clone() else { continue };
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for j in 0..n {
            if mask & (1 << j) != 0 {
                continue;
            }
            let above = (mask >> (j + 1)).count_ones();
            let mut term = mul(&val, &entry(row, j));
            if above % 2 == 1 {
                term = neg(&term);
            }
            let next = mask | (1 << j);
            dp[next] = Some(match &dp[next] {
                Some(x) => add(x, &term),
                None => term,
            });
        }
    }
    dp[(1 << n) - 1].clone().unwrap_or(zero)
}

pub fn identity(f: &Field, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&row[k], &b[k][j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(f: &Field, a: &Matrix, v: &[Elem]) -> Vec<Elem> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
        })
        .collect()
}

pub fn determinant(f: &Field, m: &Matrix) -> Result<Elem> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::ArityMismatch {
            expected: n,
            got: m.first().map_or(0, |r| r.len()),
        });
    }
    if f.is_puiseux() {
        return Ok(det_by_subsets(
            n,
            |i, j| m[i][j].clone(),
            f.zero(),
            f.one(),
            |a, b| f.add(a, b),
            |a, b| f.mul(a, b),
            |a| f.neg(a),
        ));
    }
    let mut a = m.clone();
    let mut det = f.one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !f.is_zero(&a[r][col])) else {
            return Ok(f.zero());
        };
        if p != col {
            a.swap(p, col);
            det = f.neg(&det);
        }
        let pivot = a[col][col].clone();
        det = f.mul(&det, &pivot);
        let inv = f.inv(&pivot)?;
        for r in (col + 1)..n {
            if f.is_zero(&a[r][col]) {
                continue;
            }
            let factor = f.mul(&a[r][col], &inv);
            for c in col..n {
                let v = f.sub(&a[r][c], &f.mul(&factor, &a[col][c]));
                a[r][c] = v;
            }
        }
    }
    Ok(det)
}

/// Adjugate matrix (transpose of the cofactor matrix), division free.
pub fn adjugate(f: &Field, m: &Matrix) -> Matrix {
    let n = m.len();
    if n == 1 {
        return vec![vec![f.one()]];
    }
    let mut adj = vec![vec![f.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Matrix = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
                .collect();
            let d = det_by_subsets(
                n - 1,
                |a, b| minor[a][b].clone(),
                f.zero(),
                f.one(),
                |a, b| f.add(a, b),
                |a, b| f.mul(a, b),
                |a| f.neg(a),
            );
            adj[j][i] = if (i + j) % 2 == 1 { f.neg(&d) } else { d };
        }
    }
    adj
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(f: &Field, a: &mut Matrix) -> Result<Vec<usize>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(p, r);
        let inv = f.inv(&a[r][c])?;
        for k in c..cols {
            a[r][k] = f.mul(&a[r][k], &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(&a[i][c]) {
                continue;
            }
            let factor = a[i][c].clone();
            for k in c..cols {
                let v = f.sub(&a[i][k], &f.mul(&factor, &a[r][k]));
                a[i][k] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Ok(pivots)
}

pub fn rank(f: &Field, m: &Matrix) -> Result<usize> {
    let mut a = m.clone();
    Ok(rref(f, &mut a)?.len())
}

/// Solves `a x = b` for square invertible `a`.
pub fn solve(f: &Field, a: &Matrix, b: &[Elem]) -> Result<Vec<Elem>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(f, &mut aug)?;
    if piv.len() != n || piv.iter().any(|&c| c >= n) {
        return Err(Error::DegenerateForm);
    }
    Ok(aug.iter().map(|r| r[n].clone()).collect())
}

pub fn is_symmetric(m: &Matrix) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, x)| *x == m[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(f: &Field, rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn determinants_agree() {
        let q = Field::rationals();
        let m = mat(&q, &[&[2, -1, 0, 3], &[1, 4, 2, 0], &[0, 1, 1, 1], &[5, 0, -2, 1]]);
        let d1 = determinant(&q, &m).unwrap();
        let d2 = det_by_subsets(
            4,
            |i, j| m[i][j].clone(),
            q.zero(),
            q.one(),
            |a, b| q.add(a, b),
            |a, b| q.mul(a, b),
            |a| q.neg(a),
        );
        assert_eq!(d1, d2);
        // hand cofactor oracle for a 2x2
        let two = mat(&q, &[&[-6, 0], &[0, 2]]);
        assert_eq!(determinant(&q, &two).unwrap(), q.from_i64(-12));
    }

    #[test]
    fn adjugate_inverts() {
        let q = Field::rationals();
        let m = mat(&q, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let adj = adjugate(&q, &m);
        let d = determinant(&q, &m).unwrap();
        let prod = mat_mul(&q, &m, &adj);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expect = if i == j { d.clone() } else { q.zero() };
                assert_eq!(*x, expect);
            }
        }
    }

    #[test]
    fn rref_rank() {
        let f5 = Field::prime(5).unwrap();
        let m = mat(&f5, &[&[1, 2, 3], &[0, 1, 1], &[1, 3, 4]]);
        assert_eq!(rank(&f5, &m).unwrap(), 2);
        let x = solve(&f5, &mat(&f5, &[&[1, 1], &[1, 4]]), &[f5.from_i64(2), f5.from_i64(0)]).unwrap();
        assert_eq!(x, vec![f5.one(), f5.one()]);
    }
}
