//! Total-degree homotopy `gamma (1 - t) S(x) + t G(x)` from the start system
//! `x_j^D - 1` to the cleared critical equations.

use num_complex::Complex64 as C;
use rayon::prelude::*;

use super::numeric::{norm, solve_linear, NumArrangement};

pub const STEP_FLOOR: f64 = 1e-14;
const MAX_STEP: f64 = 0.05;
const DIVERGENCE: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathEnd {
    Converged,
    Diverged,
    Failed,
}

#[derive(Clone, Debug)]
pub struct PathResult {
    pub x: Vec<C>,
    pub end: PathEnd,
}

struct System<'a> {
    na: &'a NumArrangement,
    u: Vec<C>,
    scale: f64,
    gamma: C,
    degree: i32,
}

impl System<'_> {
    fn target(&self, x: &[C]) -> (Vec<C>, Vec<Vec<C>>) {
        let (mut g, mut j) = self.na.cleared(&self.u, x);
        for v in g.iter_mut() {
            *v *= self.scale;
        }
        for row in j.iter_mut() {
            for v in row.iter_mut() {
                *v *= self.scale;
            }
        }
        (g, j)
    }

    /// `(H, H_x, H_t)` at `(x, t)`.
    fn eval(&self, x: &[C], t: f64) -> (Vec<C>, Vec<Vec<C>>, Vec<C>) {
        let (g, jg) = self.target(x);
        let d = x.len();
        let mut h = vec![C::new(0.0, 0.0); d];
        let mut hx = vec![vec![C::new(0.0, 0.0); d]; d];
        let mut ht = vec![C::new(0.0, 0.0); d];
        for j in 0..d {
            let s = x[j].powi(self.degree) - 1.0;
            let ds = x[j].powi(self.degree - 1) * self.degree as f64;
            h[j] = self.gamma * (1.0 - t) * s + g[j] * t;
            ht[j] = g[j] - self.gamma * s;
            for m in 0..d {
                hx[j][m] = jg[j][m] * t;
            }
            hx[j][j] += self.gamma * (1.0 - t) * ds;
        }
        (h, hx, ht)
    }

    fn velocity(&self, x: &[C], t: f64) -> Option<Vec<C>> {
        let (_, hx, ht) = self.eval(x, t);
        solve_linear(hx, ht.iter().map(|v| -v).collect())
    }

    fn correct(&self, x: &mut Vec<C>, t: f64, iters: usize, tol: f64) -> bool {
        let mut prev = f64::INFINITY;
        for _ in 0..iters {
            let (h, hx, _) = self.eval(x, t);
            let Some(dx) = solve_linear(hx, h.iter().map(|v| -v).collect()) else { return false };
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
            let step = norm(&dx) / (1.0 + norm(x));
            if step < tol {
                return true;
            }
            if step > prev {
                return false;
            }
            prev = step;
        }
        false
    }

    fn track(&self, start: Vec<C>) -> PathResult {
        let mut x = start;
        let mut t = 0.0;
        let mut h: f64 = 0.01;
        let mut streak = 0;
        while t < 1.0 {
            let step = h.min(1.0 - t);
            let Some(k1) = self.velocity(&x, t) else { return PathResult { x, end: PathEnd::Failed } };
            let rk = |k: &[C], c: f64| -> Vec<C> { x.iter().zip(k).map(|(a, b)| a + b * (c * step)).collect() };
            let pred = (|| {
                let k2 = self.velocity(&rk(&k1, 0.5), t + 0.5 * step)?;
                let k3 = self.velocity(&rk(&k2, 0.5), t + 0.5 * step)?;
                let k4 = self.velocity(&rk(&k3, 1.0), t + step)?;
                Some(
                    (0..x.len())
                        .map(|i| x[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (step / 6.0))
                        .collect::<Vec<C>>(),
                )
            })();
            let accepted = pred.and_then(|mut y| {
                let ok = self.correct(&mut y, t + step, 3, 1e-9);
                let jump = norm(&y.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>()) / (1.0 + norm(&x));
                (ok && jump < 0.25).then_some(y)
            });
            match accepted {
                Some(y) => {
                    x = y;
                    t += step;
                    streak += 1;
                    if streak >= 3 {
                        h = (h * 2.0).min(MAX_STEP);
                        streak = 0;
                    }
                    if norm(&x) > DIVERGENCE {
                        return PathResult { x, end: PathEnd::Diverged };
                    }
                }
                None => {
                    h *= 0.5;
                    streak = 0;
                    if h < STEP_FLOOR {
                        return PathResult { x, end: PathEnd::Failed };
                    }
                }
            }
        }
        let end = if self.correct(&mut x, 1.0, 20, 1e-11) { PathEnd::Converged } else { PathEnd::Failed };
        PathResult { x, end }
    }
}

/// Tracks all `D^d` paths (with `D` one less than the number of forms); output
/// order follows the start solutions.
pub fn track_all(na: &NumArrangement, u: &[C], gamma: C) -> Vec<PathResult> {
    let d = na.d;
    let degree = na.n_plus_1() as i32 - 1;
    let umax = u.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let scale = na.row_scale.iter().map(|s| 1.0 / s).product::<f64>();
    let sys = System { na, u: u.iter().map(|v| v / umax).collect(), scale, gamma, degree };
    let roots: Vec<C> = (0..degree)
        .map(|k| C::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / degree as f64))
        .collect();
    let total = (degree as usize).pow(d as u32);
    let starts: Vec<Vec<C>> = (0..total)
        .map(|mut idx| {
            (0..d)
                .map(|_| {
                    let r = roots[idx % degree as usize];
                    idx /= degree as usize;
                    r
                })
                .collect()
        })
        .collect();
    starts.into_par_iter().map(|s| sys.track(s)).collect()
}

/// Follows a critical point of `u0` to one of `u1` along
/// `u(s) = w(s) u0 + (1 - w(s)) u1` with `w = (1 - s) gamma / ((1 - s) gamma + s)`,
/// correcting with Newton steps on the gradient equations.
pub fn track_parameter(na: &NumArrangement, u0: &[C], u1: &[C], gamma: C, start: Vec<C>) -> PathResult {
    let at = |s: f64| -> Vec<C> {
        let w = gamma * (1.0 - s) / (gamma * (1.0 - s) + s);
        u0.iter().zip(u1).map(|(a, b)| a * w + b * (1.0 - w)).collect()
    };
    let mut x = start;
    let mut prev: Option<(Vec<C>, f64)> = None;
    let mut s = 0.0;
    let mut h: f64 = 1e-3;
    let mut streak = 0;
    while s < 1.0 {
        let step = h.min(1.0 - s);
        let mut y: Vec<C> = match &prev {
            Some((xp, hp)) => x.iter().zip(xp).map(|(a, b)| a + (a - b) * (step / hp)).collect(),
            None => x.clone(),
        };
        let u = at(s + step);
        let mut ok = false;
        for _ in 0..4 {
            let d = na.polish(&u, &mut y, 1);
            if !d.is_finite() {
                break;
            }
            if d < 1e-10 {
                ok = true;
                break;
            }
        }
        let jump = norm(&y.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>()) / (1.0 + norm(&x));
        if ok && jump < 0.1 {
            prev = Some((std::mem::replace(&mut x, y), step));
            s += step;
            streak += 1;
            if streak >= 3 {
                h = (h * 2.0).min(MAX_STEP);
                streak = 0;
            }
            if norm(&x) > DIVERGENCE {
                return PathResult { x, end: PathEnd::Diverged };
            }
        } else {
            h *= 0.5;
            streak = 0;
            if h < STEP_FLOOR {
                return PathResult { x, end: PathEnd::Failed };
            }
        }
    }
    let d = na.polish(u1, &mut x, 20);
    let end = if d.is_finite() { PathEnd::Converged } else { PathEnd::Failed };
    PathResult { x, end }
}
