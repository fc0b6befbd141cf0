//! The moduli spaces M_{0,m} as hyperplane arrangement complements, with
//! Mandelstam labels, the Gram-matrix identity and soft-limit weights.

mod softlimit;

pub use softlimit::{soft_limit_m06, soft_limit_m06_with, SoftLimitReport, SpuriousFactor};

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::det;
use crate::poly::{parse_expr, Poly};
use crate::rational::{format_rat, Rat};

/// Column pairs `(i, j)` (1-based) with non-constant 2x2 minors, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MandelstamMap {
    pub m: usize,
    pub pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl MandelstamMap {
    pub fn new(m: usize) -> Result<Self> {
        if m < 5 {
            return Err(Error::Invalid(format!("m = {m}: need m >= 5")));
        }
        let mut pairs = Vec::new();
        for i in 1..m {
            for j in i + 1..m {
                if j >= 3 {
                    pairs.push((i, j));
                }
            }
        }
        let index = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        Ok(MandelstamMap { m, pairs, index })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn label(&self, k: usize) -> String {
        let (i, j) = self.pairs[k];
        if self.m <= 9 {
            format!("s{i}{j}")
        } else {
            format!("s{i}_{j}")
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len()).map(|k| self.label(k)).collect()
    }

    /// Coordinate permutation induced by permuting the middle marked points
    /// `3..m-1`: `sigma[p - 3]` is the new position of point `p`. Returns
    /// `perm` with old coordinate `k` mapped to new coordinate `perm[k]`.
    pub fn middle_permutation(&self, sigma: &[usize]) -> Result<Vec<usize>> {
        let mid = self.m - 3;
        let mut seen = sigma.to_vec();
        seen.sort_unstable();
        if sigma.len() != mid || seen != (3..self.m).collect::<Vec<_>>() {
            return Err(Error::Invalid("not a permutation of the middle points".into()));
        }
        let map = |p: usize| if (3..self.m).contains(&p) { sigma[p - 3] } else { p };
        Ok(self.pairs.iter().map(|&(i, j)| self.index_of(map(i), map(j)).expect("pair survives")).collect())
    }
}

/// The arrangement of non-constant 2x2 minors of the matrix with columns
/// `(1:0), (1:1), (1:x_1), ..., (1:x_{m-3}), (0:1)`.
pub fn m0m_arrangement(m: usize) -> Result<(Arrangement, MandelstamMap)> {
    let map = MandelstamMap::new(m)?;
    let d = m - 3;
    // column k (1-based) as (top, bottom) with bottom an affine form in x
    let col = |k: usize| -> (Rat, Vec<Rat>) {
        let mut bottom = vec![Rat::zero(); d + 1];
        let top = if k == m { Rat::zero() } else { Rat::one() };
        match k {
            1 => {}
            2 => bottom[0] = Rat::one(),
            _ if k == m => bottom[0] = Rat::one(),
            _ => bottom[k - 2] = Rat::one(),
        }
        (top, bottom)
    };
    let mut b = Vec::new();
    let mut a = Vec::new();
    for &(i, j) in &map.pairs {
        let (ti, bi) = col(i);
        let (tj, bj) = col(j);
        // top_i * bottom_j - top_j * bottom_i
        let row: Vec<Rat> = bi.iter().zip(&bj).map(|(x, y)| &ti * y - &tj * x).collect();
        b.push(row[0].clone());
        a.push(row[1..].to_vec());
    }
    let arr = Arrangement::new(b, a, Some(map.labels()))?;
    Ok((arr, map))
}

/// Closed form of the logarithmic discriminant of M_{0,5} in the coordinates
/// `(s13, s14, s23, s24, s34)`.
pub fn m05_discriminant(vars: &[String]) -> Poly {
    let generic: Vec<String> = crate::poly::var_names("u", 5);
    let q = parse_expr(&generic, "u0*u3 + u0*u4 + u1*u4 + u1*u2 + u2*u4 + u3*u4 + u4^2").expect("static expression");
    let m = parse_expr(&generic, "4*u0*u1*u2*u3").expect("static expression");
    let p = q.mul(&q).sub(&m);
    p.rename(vars)
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub gram: Vec<Vec<String>>,
    pub minors: Vec<String>,
    pub delta: String,
    pub all_equal: bool,
}

/// Completes the symmetric 5x5 matrix of `s_ij` with zero diagonal and zero
/// row sums from `(s13, s14, s23, s24, s34)`.
pub fn gram_matrix(u: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    if u.len() != 5 {
        return Err(Error::Arity { expected: 5, got: u.len() });
    }
    let (s13, s14, s23, s24, s34) = (&u[0], &u[1], &u[2], &u[3], &u[4]);
    let s12 = -(s13 + s14 + s23 + s24 + s34);
    let s15 = -(&s12 + s13 + s14);
    let s25 = -(&s12 + s23 + s24);
    let s35 = -(s13 + s23 + s34);
    let s45 = -(s14 + s24 + s34);
    let mut g = vec![vec![Rat::zero(); 5]; 5];
    let mut set = |i: usize, j: usize, v: &Rat| {
        g[i - 1][j - 1] = v.clone();
        g[j - 1][i - 1] = v.clone();
    };
    set(1, 2, &s12);
    set(1, 3, s13);
    set(1, 4, s14);
    set(1, 5, &s15);
    set(2, 3, s23);
    set(2, 4, s24);
    set(2, 5, &s25);
    set(3, 4, s34);
    set(3, 5, &s35);
    set(4, 5, &s45);
    Ok(g)
}

/// Checks that every principal 4x4 minor of the Gram matrix equals the
/// discriminant at `u`.
pub fn gram_minor_check(u: &[Rat]) -> Result<GramReport> {
    let g = gram_matrix(u)?;
    if g.iter().any(|r| !r.iter().fold(Rat::zero(), |s, x| s + x).is_zero()) {
        return Err(Error::Invalid("row sums do not vanish".into()));
    }
    let minors: Vec<Rat> = (0..5)
        .map(|skip| {
            let keep: Vec<usize> = (0..5).filter(|&k| k != skip).collect();
            det(&keep.iter().map(|&r| keep.iter().map(|&c| g[r][c].clone()).collect()).collect::<Vec<_>>())
        })
        .collect();
    let vars = crate::poly::var_names("u", 5);
    let delta = m05_discriminant(&vars).eval(u)?;
    Ok(GramReport {
        gram: g.iter().map(|r| r.iter().map(format_rat).collect()).collect(),
        all_equal: minors.iter().all(|m| *m == delta),
        minors: minors.iter().map(format_rat).collect(),
        delta: format_rat(&delta),
    })
}

/// Weight vector with 1 on every coordinate `s_ij` with `k` in `{i, j}`.
pub fn soft_limit_weight(m: usize, k: usize) -> Result<Vec<i64>> {
    let map = MandelstamMap::new(m)?;
    if !(3..m).contains(&k) {
        return Err(Error::Invalid(format!("particle {k} out of range 3..={}", m - 1)));
    }
    Ok(map.pairs.iter().map(|&(i, j)| i64::from(i == k || j == k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use crate::rng::substream;
    use rand::Rng as _;

    #[test]
    fn m05_forms_and_labels() {
        let (arr, map) = m0m_arrangement(5).unwrap();
        assert_eq!(map.pairs, vec![(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(arr.labels().unwrap(), ["s13", "s14", "s23", "s24", "s34"]);
        let texts: Vec<String> = arr.forms().iter().map(|f| f.to_compact()).collect();
        assert_eq!(texts, ["x1", "x2", "x1-1", "x2-1", "-x1+x2"]);
    }

    #[test]
    fn counts_and_ml_degrees() {
        let (a6, m6) = m0m_arrangement(6).unwrap();
        assert_eq!((a6.d(), a6.n_plus_1(), m6.len()), (3, 9, 9));
        assert_eq!(m0m_arrangement(5).unwrap().0.ml_degree().unwrap(), 2);
        assert_eq!(a6.ml_degree().unwrap(), 6);
        assert_eq!(m0m_arrangement(7).unwrap().0.ml_degree().unwrap(), 24);
        assert!(m0m_arrangement(4).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(soft_limit_weight(5, 4).unwrap(), vec![0, 1, 0, 1, 1]);
        assert_eq!(soft_limit_weight(5, 3).unwrap(), vec![1, 0, 1, 0, 1]);
        for m in 5..=8 {
            for k in 3..m {
                assert_eq!(soft_limit_weight(m, k).unwrap().iter().sum::<i64>(), m as i64 - 2);
            }
        }
        assert!(soft_limit_weight(5, 5).is_err());
    }

    #[test]
    fn gram_values() {
        let r = gram_minor_check(&vec![rat(1); 5]).unwrap();
        assert!(r.all_equal);
        assert_eq!(r.delta, "45");
        let r = gram_minor_check(&[ratio(-1, 2), rat(1), rat(2), ratio(-1, 2), rat(-1)]).unwrap();
        assert!(r.all_equal);
        assert_eq!(r.delta, "-7/16");
        let mut rng = substream(11, "gram");
        for _ in 0..100 {
            let u: Vec<Rat> = (0..5).map(|_| ratio(rng.gen_range(-30..=30), rng.gen_range(1..=9))).collect();
            assert!(gram_minor_check(&u).unwrap().all_equal);
        }
    }

    #[test]
    fn middle_permutation_swaps_labels() {
        let map = MandelstamMap::new(5).unwrap();
        assert_eq!(map.middle_permutation(&[4, 3]).unwrap(), vec![1, 0, 3, 2, 4]);
    }
}
