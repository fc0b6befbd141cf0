//! Exact linear algebra over the rationals: fraction-free (Bareiss) determinants
//! and ranks, nullspaces in reduced echelon form.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::rational::{denom_lcm, Rat};

/// An integral domain with exact division, enough for Bareiss elimination.
pub trait ExactRing: Clone + Send + Sync {
    fn r_is_zero(&self) -> bool;
    fn r_zero(&self) -> Self;
    fn r_one(&self) -> Self;
    fn r_mul(&self, other: &Self) -> Self;
    fn r_sub(&self, other: &Self) -> Self;
    fn r_neg(&self) -> Self;
    /// Exact quotient; the caller guarantees divisibility.
    fn r_div(&self, other: &Self) -> Self;
}

impl ExactRing for BigInt {
    fn r_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn r_zero(&self) -> Self {
        BigInt::zero()
    }
    fn r_one(&self) -> Self {
        BigInt::one()
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn r_neg(&self) -> Self {
        -self
    }
    fn r_div(&self, o: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % o)));
        self / o
    }
}

impl ExactRing for Rat {
    fn r_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn r_zero(&self) -> Self {
        Rat::zero()
    }
    fn r_one(&self) -> Self {
        Rat::one()
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn r_neg(&self) -> Self {
        -self
    }
    fn r_div(&self, o: &Self) -> Self {
        self / o
    }
}

/// Bareiss fraction-free determinant of a square matrix with at least one row.
pub fn bareiss_det<T: ExactRing>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square non-empty matrix");
    let mut negate = false;
    let mut prev = m[0][0].r_one();
    for k in 0..n - 1 {
        if m[k][k].r_is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].r_is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return m[0][0].r_zero(),
            }
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        rest.par_iter_mut().for_each(|row| {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = pivot.r_mul(&row[j]).r_sub(&lead.r_mul(&pivot_row[j]));
                row[j] = v.r_div(&prev);
            }
            row[k] = lead.r_zero();
        });
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.r_neg()
    } else {
        d
    }
}

/// Clears denominators row by row; returns the integer matrix.
fn integer_rows(rows: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = denom_lcm(r.iter());
            r.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Exact determinant of a rational square matrix.
pub fn det(rows: &[Vec<Rat>]) -> Rat {
    if rows.is_empty() {
        return Rat::one();
    }
    let scale: Rat = rows
        .iter()
        .map(|r| Rat::from_integer(denom_lcm(r.iter())))
        .fold(Rat::one(), |a, b| a * b);
    Rat::from_integer(bareiss_det(integer_rows(rows))) / scale
}

/// Rank by fraction-free elimination over the integers.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m = integer_rows(rows);
    let ncols = m[0].len();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let (a, b) = (m[r][c].clone(), m[i][c].clone());
            for j in c..ncols {
                let v = &a * &m[i][j] - &b * &m[r][j];
                m[i][j] = v;
            }
            // keep entries small
            let g = m[i].iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
            if !g.is_zero() && !g.is_one() {
                for x in m[i].iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Reduced row echelon form over Q; returns pivot columns.
pub fn rref(rows: &mut [Vec<Rat>]) -> Vec<usize> {
    let mut pivots = Vec::new();
    if rows.is_empty() {
        return pivots;
    }
    let ncols = rows[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let v = &f * &rows[r][j];
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right nullspace `{v : M v = 0}`, one vector per free column,
/// with that free coordinate equal to one (reduced echelon form of the basis).
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Sub-matrix with the given rows.
pub fn select_rows<T: Clone>(m: &[Vec<T>], idx: &[usize]) -> Vec<Vec<T>> {
    idx.iter().map(|&i| m[i].clone()).collect()
}

pub fn is_nonneg(r: &Rat) -> bool {
    !r.is_negative()
}
