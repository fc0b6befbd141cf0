use num_complex::Complex64 as C;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::{det, select_rows};
use crate::rational::{rat_to_f64, subsets};

/// Floating-point view of an arrangement for the solvers.
#[derive(Clone, Debug)]
pub struct NumArrangement {
    pub d: usize,
    pub b: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    /// Max-norm of each row `[b_i, A_i]`.
    pub row_scale: Vec<f64>,
    /// `(I, det(A_I)^2)` for every `d`-subset with nonzero minor.
    pub minors: Vec<(Vec<usize>, f64)>,
}

impl NumArrangement {
    pub fn new(arr: &Arrangement) -> Self {
        let (b, a) = arr.to_f64();
        let row_scale = b
            .iter()
            .zip(&a)
            .map(|(bi, ai)| ai.iter().fold(bi.abs(), |m, x| m.max(x.abs())))
            .collect();
        let minors = subsets(arr.n_plus_1(), arr.d())
            .into_iter()
            .filter_map(|s| {
                let m = det(&select_rows(arr.a(), &s));
                let m = rat_to_f64(&m);
                (m != 0.0).then(|| (s, m * m))
            })
            .collect();
        NumArrangement { d: arr.d(), b, a, row_scale, minors }
    }

    pub fn n_plus_1(&self) -> usize {
        self.b.len()
    }

    pub fn forms(&self, x: &[C]) -> Vec<C> {
        self.b
            .iter()
            .zip(&self.a)
            .map(|(bi, ai)| ai.iter().zip(x).fold(C::new(*bi, 0.0), |s, (aij, xj)| s + xj * aij))
            .collect()
    }

    /// `min_i |l_i(x)| / ||[b_i, A_i]||`.
    pub fn wall_distance(&self, x: &[C]) -> f64 {
        self.forms(x)
            .iter()
            .zip(&self.row_scale)
            .map(|(l, s)| l.norm() / s)
            .fold(f64::INFINITY, f64::min)
    }

    fn forms_checked(&self, x: &[C]) -> Result<Vec<C>> {
        let l = self.forms(x);
        if let Some(i) = l.iter().position(|v| v.norm() == 0.0) {
            return Err(Error::OnHyperplane(i));
        }
        Ok(l)
    }

    pub fn gradient(&self, u: &[C], x: &[C]) -> Result<Vec<C>> {
        let l = self.forms_checked(x)?;
        Ok(self.gradient_with(u, &l))
    }

    fn gradient_with(&self, u: &[C], l: &[C]) -> Vec<C> {
        (0..self.d)
            .map(|j| (0..self.n_plus_1()).map(|i| u[i] * self.a[i][j] / l[i]).sum())
            .collect()
    }

    /// Largest relative gradient component: `|F_j| / max(1, sum_i |u_i A_ij / l_i|)`.
    pub fn relative_residual(&self, u: &[C], x: &[C]) -> f64 {
        let l = self.forms(x);
        (0..self.d)
            .map(|j| {
                let (s, scale) = (0..self.n_plus_1()).fold((C::new(0.0, 0.0), 0.0), |(s, sc), i| {
                    let t = u[i] * self.a[i][j] / l[i];
                    (s + t, sc + t.norm())
                });
                s.norm() / scale.max(1.0)
            })
            .fold(0.0, f64::max)
    }

    /// `A^T diag(u / l^2) A`; the Jacobian of the gradient is its negative.
    pub fn hessian_matrix(&self, u: &[C], l: &[C]) -> Vec<Vec<C>> {
        let w: Vec<C> = u.iter().zip(l).map(|(ui, li)| ui / (li * li)).collect();
        (0..self.d)
            .map(|p| (0..self.d).map(|q| (0..self.n_plus_1()).map(|i| w[i] * self.a[i][p] * self.a[i][q]).sum()).collect())
            .collect()
    }

    /// Minor-sum Hessian determinant and its scale `sum_I det(A_I)^2 |u^I / l_I^2|`.
    pub fn hessian_det(&self, u: &[C], x: &[C]) -> Result<(C, f64)> {
        let l = self.forms_checked(x)?;
        let w: Vec<C> = u.iter().zip(&l).map(|(ui, li)| ui / (li * li)).collect();
        Ok(self.minors.iter().fold((C::new(0.0, 0.0), 0.0), |(h, s), (idx, m2)| {
            let t = idx.iter().fold(C::new(*m2, 0.0), |t, &i| t * w[i]);
            (h + t, s + t.norm())
        }))
    }

    /// Newton polish on the gradient equations; returns the final step size.
    pub fn polish(&self, u: &[C], x: &mut [C], iters: usize) -> f64 {
        let mut last = f64::INFINITY;
        for _ in 0..iters {
            let l = self.forms(x);
            if l.iter().any(|v| v.norm() == 0.0) {
                return f64::INFINITY;
            }
            let g = self.gradient_with(u, &l);
            // J = -H, so the step solves H dx = g
            let h = self.hessian_matrix(u, &l);
            let Some(dx) = solve_linear(h, g) else { return f64::INFINITY };
            let xn = norm(x);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
            last = norm(&dx) / (1.0 + xn);
            if !last.is_finite() {
                return f64::INFINITY;
            }
            if last < 1e-16 {
                break;
            }
        }
        last
    }

    /// The cleared system `G_j = sum_i u_i A_ij prod_{k != i} l_k` and its Jacobian.
    pub fn cleared(&self, u: &[C], x: &[C]) -> (Vec<C>, Vec<Vec<C>>) {
        let n1 = self.n_plus_1();
        let d = self.d;
        let l = self.forms(x);
        let one = C::new(1.0, 0.0);
        // products excluding one index and excluding two indices
        let mut prefix = vec![one; n1 + 1];
        for k in 0..n1 {
            prefix[k + 1] = prefix[k] * l[k];
        }
        let mut suffix = vec![one; n1 + 1];
        for k in (0..n1).rev() {
            suffix[k] = suffix[k + 1] * l[k];
        }
        let excl1: Vec<C> = (0..n1).map(|i| prefix[i] * suffix[i + 1]).collect();
        let mut g = vec![C::new(0.0, 0.0); d];
        let mut jac = vec![vec![C::new(0.0, 0.0); d]; d];
        for i in 0..n1 {
            let c: Vec<C> = (0..d).map(|j| u[i] * self.a[i][j]).collect();
            for j in 0..d {
                g[j] += c[j] * excl1[i];
            }
            // derivative of prod_{k != i} l_k along x_m
            let mut dprod = vec![C::new(0.0, 0.0); d];
            let mut mid = one;
            for k in (i + 1)..n1 {
                // prod over l excluding i and k
                let e = prefix[i] * mid * suffix[k + 1];
                for m in 0..d {
                    dprod[m] += e * self.a[k][m];
                }
                mid *= l[k];
            }
            let mut mid = one;
            for k in (0..i).rev() {
                let e = prefix[k] * mid * suffix[i + 1];
                for m in 0..d {
                    dprod[m] += e * self.a[k][m];
                }
                mid *= l[k];
            }
            for j in 0..d {
                for m in 0..d {
                    jac[j][m] += c[j] * dprod[m];
                }
            }
        }
        (g, jac)
    }
}

pub fn norm(x: &[C]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Gaussian elimination with partial pivoting.
pub fn solve_linear(mut m: Vec<Vec<C>>, mut rhs: Vec<C>) -> Option<Vec<C>> {
    let n = rhs.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&a, &b| m[a][c].norm().total_cmp(&m[b][c].norm()))?;
        if m[piv][c].norm() == 0.0 || !m[piv][c].norm().is_finite() {
            return None;
        }
        m.swap(c, piv);
        rhs.swap(c, piv);
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            if f.norm() == 0.0 {
                continue;
            }
            for k in c..n {
                let v = m[c][k];
                m[r][k] -= f * v;
            }
            let v = rhs[c];
            rhs[r] -= f * v;
        }
    }
    let mut x = vec![C::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: C = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use rand::Rng as _;

    #[test]
    fn cleared_jacobian_matches_finite_differences() {
        let mut rng = substream(1, "fd");
        let arr = Arrangement::random_doubly_uniform(3, 6, &mut rng);
        let na = NumArrangement::new(&arr);
        let u: Vec<C> = (0..6).map(|_| C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0))).collect();
        let x: Vec<C> = (0..3).map(|_| C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0))).collect();
        let (g, j) = na.cleared(&u, &x);
        let l = na.forms(&x);
        let prod: C = l.iter().product();
        let grad = na.gradient(&u, &x).unwrap();
        for k in 0..3 {
            assert!((g[k] - grad[k] * prod).norm() < 1e-9 * (1.0 + g[k].norm()));
        }
        let h = 1e-6;
        for m in 0..3 {
            let mut xp = x.clone();
            xp[m] += h;
            let mut xm = x.clone();
            xm[m] -= h;
            let (gp, _) = na.cleared(&u, &xp);
            let (gm, _) = na.cleared(&u, &xm);
            for k in 0..3 {
                let fd = (gp[k] - gm[k]) / (2.0 * h);
                assert!((fd - j[k][m]).norm() < 1e-5 * (1.0 + j[k][m].norm()));
            }
        }
    }
}
