use std::fmt;

use num_complex::Complex64 as C;
use num_traits::Signed;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::aberth::aberth_roots;
use super::homotopy::{track_all, track_parameter, PathEnd};
use rayon::prelude::*;
use super::numeric::{norm, NumArrangement};
use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::rational::{rat_to_f64, Rat};
use crate::rng::substream_n;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative gradient residual for certified points.
    pub res: f64,
    /// Relative distance to the nearest hyperplane.
    pub wall: f64,
    /// Relative Hessian determinant below which a point is degenerate.
    pub deg: f64,
    /// Relative distance below which two points collide.
    pub collision: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { res: 1e-10, wall: 1e-8, deg: 1e-8, collision: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointStatus {
    Certified,
    Suspect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Complete,
    Incomplete { found: usize, expected: usize },
    Excess { found: usize, expected: usize },
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveStatus::Complete => write!(f, "complete"),
            SolveStatus::Incomplete { found, expected } => write!(f, "incomplete(found {found} of {expected})"),
            SolveStatus::Excess { found, expected } => write!(f, "excess(found {found} of {expected})"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CriticalSolutions {
    pub points: Vec<Vec<C>>,
    pub residuals: Vec<f64>,
    pub hessdets: Vec<C>,
    /// `|hessdet|` divided by the sum of absolute values of its minor terms.
    pub hess_relative: Vec<f64>,
    pub min_wall_distance: Vec<f64>,
    pub status: Vec<PointStatus>,
    pub count_expected: usize,
    pub collision: bool,
    pub attempts: usize,
    pub discarded_on_walls: usize,
    pub failed_paths: usize,
    pub warnings: Vec<String>,
}

impl CriticalSolutions {
    pub fn certified(&self) -> usize {
        self.status.iter().filter(|s| **s == PointStatus::Certified).count()
    }

    pub fn suspect(&self) -> usize {
        self.points.len() - self.certified()
    }

    pub fn solve_status(&self) -> SolveStatus {
        let (found, expected) = (self.certified(), self.count_expected);
        match found.cmp(&expected) {
            std::cmp::Ordering::Less => SolveStatus::Incomplete { found, expected },
            std::cmp::Ordering::Equal => SolveStatus::Complete,
            std::cmp::Ordering::Greater => SolveStatus::Excess { found, expected },
        }
    }

    /// Certified points only.
    pub fn certified_points(&self) -> Vec<&Vec<C>> {
        self.points.iter().zip(&self.status).filter(|(_, s)| **s == PointStatus::Certified).map(|(p, _)| p).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pair = |z: &C| serde_json::json!([z.re, z.im]);
        serde_json::json!({
            "points": self.points.iter().map(|p| p.iter().map(pair).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "residuals": self.residuals,
            "hessdets": self.hessdets.iter().map(pair).collect::<Vec<_>>(),
            "hessdet_relative": self.hess_relative,
            "min_wall_distance": self.min_wall_distance,
            "status": self.status,
            "count_expected": self.count_expected,
            "count_certified": self.certified(),
            "solve_status": self.solve_status().to_string(),
            "collision": self.collision,
            "attempts": self.attempts,
            "discarded_on_walls": self.discarded_on_walls,
            "failed_paths": self.failed_paths,
            "warnings": self.warnings,
        })
    }
}

fn raw_candidates_line(na: &NumArrangement, u: &[C]) -> (Vec<Vec<C>>, usize) {
    // sum_i u_i a_i prod_{k != i} (a_k x + b_k)
    let n1 = na.n_plus_1();
    let mut coeffs = vec![C::new(0.0, 0.0); n1];
    for i in 0..n1 {
        let mut p = vec![C::new(u[i].re, u[i].im) * na.a[i][0]];
        for k in (0..n1).filter(|&k| k != i) {
            let mut next = vec![C::new(0.0, 0.0); p.len() + 1];
            for (e, c) in p.iter().enumerate() {
                next[e] += c * na.b[k];
                next[e + 1] += c * na.a[k][0];
            }
            p = next;
        }
        for (e, c) in p.into_iter().enumerate() {
            coeffs[e] += c;
        }
    }
    let (roots, ok) = aberth_roots(&coeffs);
    let failed = if ok { 0 } else { roots.len() };
    (roots.into_iter().map(|r| vec![r]).collect(), failed)
}

fn solve_once(na: &NumArrangement, u: &[C], gamma: C, tol: &Tolerances, expected: usize) -> CriticalSolutions {
    let (raw, failed) = if na.d == 1 {
        raw_candidates_line(na, u)
    } else {
        let paths = track_all(na, u, gamma);
        let failed = paths.iter().filter(|p| p.end == PathEnd::Failed).count();
        (paths.into_iter().filter(|p| p.end == PathEnd::Converged).map(|p| p.x).collect(), failed)
    };
    assemble(na, u, raw, failed, tol, expected)
}

fn assemble(na: &NumArrangement, u: &[C], raw: Vec<Vec<C>>, failed: usize, tol: &Tolerances, expected: usize) -> CriticalSolutions {
    let mut out = CriticalSolutions { count_expected: expected, failed_paths: failed, attempts: 1, ..Default::default() };
    for mut x in raw {
        if na.wall_distance(&x) < tol.wall {
            out.discarded_on_walls += 1;
            continue;
        }
        na.polish(u, &mut x, 8);
        if !x.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            out.failed_paths += 1;
            continue;
        }
        let wall = na.wall_distance(&x);
        if wall < tol.wall {
            out.discarded_on_walls += 1;
            continue;
        }
        let residual = na.relative_residual(u, &x);
        let status = if residual < tol.res { PointStatus::Certified } else { PointStatus::Suspect };
        if let Some(k) = out.points.iter().position(|p| close(p, &x, tol.collision)) {
            if status == PointStatus::Certified && out.status[k] == PointStatus::Certified {
                out.collision = true;
            }
            continue;
        }
        out.push(na, u, x, residual, wall, status);
    }
    out
}

impl CriticalSolutions {
    fn push(&mut self, na: &NumArrangement, u: &[C], x: Vec<C>, residual: f64, wall: f64, status: PointStatus) {
        let (h, hs) = na.hessian_det(u, &x).unwrap_or((C::new(0.0, 0.0), 0.0));
        self.points.push(x);
        self.residuals.push(residual);
        self.hessdets.push(h);
        self.hess_relative.push(if hs > 0.0 { h.norm() / hs } else { 0.0 });
        self.min_wall_distance.push(wall);
        self.status.push(status);
    }

    /// Adds the certified points of `other` not already present.
    fn merge(&mut self, na: &NumArrangement, u: &[C], other: CriticalSolutions, tol: &Tolerances) {
        self.failed_paths += other.failed_paths;
        self.discarded_on_walls += other.discarded_on_walls;
        for i in 0..other.points.len() {
            if other.status[i] != PointStatus::Certified {
                continue;
            }
            let x = &other.points[i];
            match self.points.iter().position(|p| close(p, x, tol.collision)) {
                Some(k) if self.status[k] == PointStatus::Certified => {}
                Some(k) => {
                    self.points.remove(k);
                    self.residuals.remove(k);
                    self.hessdets.remove(k);
                    self.hess_relative.remove(k);
                    self.min_wall_distance.remove(k);
                    self.status.remove(k);
                    self.push(na, u, x.clone(), other.residuals[i], other.min_wall_distance[i], PointStatus::Certified);
                }
                None => self.push(na, u, x.clone(), other.residuals[i], other.min_wall_distance[i], PointStatus::Certified),
            }
        }
    }
}

/// Critical points of a random complex `u0`, carried over to `u`.
fn solve_by_parameter(na: &NumArrangement, u: &[C], seed: u64, tol: &Tolerances, expected: usize) -> CriticalSolutions {
    let mut rng = substream_n(seed, "critical/parameter", 0);
    let umax = u.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let target: Vec<C> = u.iter().map(|v| v / umax).collect();
    let u0: Vec<C> = (0..u.len()).map(|_| C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))).collect();
    let mut start = solve_once(na, &u0, C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)), tol, expected);
    for _ in 0..2 {
        if start.certified() >= expected {
            break;
        }
        let again = solve_once(na, &u0, C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)), tol, expected);
        start.merge(na, &u0, again, tol);
    }
    let gamma = C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let starts: Vec<Vec<C>> = start.certified_points().into_iter().cloned().collect();
    let paths: Vec<_> = starts.into_par_iter().map(|x| track_parameter(na, &u0, &target, gamma, x)).collect();
    let failed = paths.iter().filter(|p| p.end != PathEnd::Converged).count();
    assemble(na, u, paths.into_iter().filter(|p| p.end == PathEnd::Converged).map(|p| p.x).collect(), failed, tol, expected)
}

fn close(a: &[C], b: &[C], tol: f64) -> bool {
    let diff: Vec<C> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff) <= tol * (1.0 + norm(a))
}

fn expected_count(arr: &Arrangement) -> Result<usize> {
    Ok(arr.ml_degree()? as usize)
}

/// Complex critical points of the log-likelihood for numeric exponents `u`.
///
/// Lines use Aberth-Ehrlich on the cleared polynomial; higher dimensions use
/// total-degree continuation. A shortfall triggers a re-run with a fresh
/// random `gamma` drawn from `seed`, then continuation in the exponents from
/// a random complex start.
pub fn solve_critical(arr: &Arrangement, u: &[C], seed: u64, tol: &Tolerances) -> Result<CriticalSolutions> {
    if u.len() != arr.n_plus_1() {
        return Err(Error::Arity { expected: arr.n_plus_1(), got: u.len() });
    }
    let expected = expected_count(arr)?;
    let na = NumArrangement::new(arr);
    let mut warnings = Vec::new();
    let umax = u.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if u.iter().any(|v| v.norm() <= 1e-14 * umax) {
        warnings.push("some exponent is zero".to_string());
    }
    if u.iter().sum::<C>().norm() <= 1e-12 * umax {
        warnings.push("exponents sum to zero".to_string());
    }
    let attempts = if arr.d() == 1 { 1 } else { 2 };
    let mut best: Option<CriticalSolutions> = None;
    for attempt in 0..attempts {
        let mut rng = substream_n(seed, "critical/gamma", attempt as u64);
        let gamma = C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let s = solve_once(&na, u, gamma, tol, expected);
        let b = match best.as_mut() {
            Some(b) => {
                b.collision |= s.collision;
                b.merge(&na, u, s, tol);
                b
            }
            None => best.insert(s),
        };
        b.attempts = attempt + 1;
        if b.certified() >= expected {
            break;
        }
    }
    if arr.d() > 1 && best.as_ref().is_some_and(|b| b.certified() < expected) {
        let b = best.as_mut().unwrap();
        let s = solve_by_parameter(&na, u, seed, tol, expected);
        b.collision |= s.collision;
        b.merge(&na, u, s, tol);
        b.attempts += 1;
    }
    let mut best = best.expect("at least one attempt");
    best.warnings = warnings;
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Outside,
    NearDiscriminant,
    Incomplete,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Outside => "outside",
            Membership::NearDiscriminant => "near_discriminant",
            Membership::Incomplete => "incomplete",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub verdict: Membership,
    pub reason: String,
    pub found: usize,
    pub expected: usize,
    pub min_relative_hessdet: Option<f64>,
    pub seeds_tried: usize,
}

fn judge(s: &CriticalSolutions, tol: &Tolerances) -> Option<(Membership, String)> {
    let certified_rel: Vec<f64> = s
        .hess_relative
        .iter()
        .zip(&s.status)
        .filter(|(_, st)| **st == PointStatus::Certified)
        .map(|(h, _)| *h)
        .collect();
    if certified_rel.iter().any(|&h| h < tol.deg) {
        return Some((Membership::NearDiscriminant, "degenerate Hessian at a critical point".into()));
    }
    if s.collision {
        return Some((Membership::NearDiscriminant, "two critical points collide".into()));
    }
    if s.certified() == s.count_expected && s.suspect() == 0 {
        return Some((Membership::Outside, "all critical points found and non-degenerate".into()));
    }
    None
}

/// Numerical test whether `u` lies on (or near) the logarithmic discriminant.
pub fn membership_numeric(arr: &Arrangement, u: &[C], seed: u64, tol: &Tolerances) -> Result<MembershipReport> {
    let mut short = 0;
    let mut last = None;
    for k in 0..3u64 {
        let s = solve_critical(arr, u, seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15)), tol)?;
        let min_rel = s
            .hess_relative
            .iter()
            .zip(&s.status)
            .filter(|(_, st)| **st == PointStatus::Certified)
            .map(|(h, _)| *h)
            .fold(None, |m: Option<f64>, h| Some(m.map_or(h, |m| m.min(h))));
        if let Some((verdict, reason)) = judge(&s, tol) {
            return Ok(MembershipReport {
                verdict,
                reason,
                found: s.certified(),
                expected: s.count_expected,
                min_relative_hessdet: min_rel,
                seeds_tried: k as usize + 1,
            });
        }
        if s.certified() < s.count_expected {
            short += 1;
        }
        last = Some((s, min_rel));
    }
    let (s, min_rel) = last.expect("three attempts");
    let (verdict, reason) = if short == 3 {
        (Membership::NearDiscriminant, "critical point count stably short across 3 seeds".to_string())
    } else {
        (Membership::Incomplete, format!("unresolved: {}", s.solve_status()))
    };
    Ok(MembershipReport { verdict, reason, found: s.certified(), expected: s.count_expected, min_relative_hessdet: min_rel, seeds_tried: 3 })
}

#[derive(Clone, Debug, Serialize)]
pub struct VarchenkoReport {
    pub pass: bool,
    pub expected: usize,
    pub found: usize,
    pub real: usize,
    pub max_imag: f64,
    pub min_relative_hessdet: f64,
    pub points: Vec<Vec<f64>>,
}

/// For positive exponents on a real arrangement: all critical points are real,
/// their number is the bounded-region count, and none is degenerate.
pub fn varchenko_check(arr: &Arrangement, u: &[Rat], seed: u64, tol: &Tolerances) -> Result<VarchenkoReport> {
    if let Some(i) = u.iter().position(|x| !x.is_positive()) {
        return Err(Error::Invalid(format!("exponent {i} is not positive")));
    }
    let uc: Vec<C> = u.iter().map(|r| C::new(rat_to_f64(r), 0.0)).collect();
    let s = solve_critical(arr, &uc, seed, tol)?;
    let pts = s.certified_points();
    let imag: Vec<f64> = pts.iter().map(|p| p.iter().map(|z| z.im.abs()).fold(0.0, f64::max)).collect();
    let real = imag.iter().filter(|&&m| m < 1e-10).count();
    let max_imag = imag.iter().cloned().fold(0.0, f64::max);
    let min_rel = s
        .hess_relative
        .iter()
        .zip(&s.status)
        .filter(|(_, st)| **st == PointStatus::Certified)
        .map(|(h, _)| *h)
        .fold(f64::INFINITY, f64::min);
    let expected = s.count_expected;
    Ok(VarchenkoReport {
        pass: pts.len() == expected && real == expected && min_rel > tol.deg && !s.collision,
        expected,
        found: pts.len(),
        real,
        max_imag,
        min_relative_hessdet: if min_rel.is_finite() { min_rel } else { 0.0 },
        points: pts.iter().map(|p| p.iter().map(|z| z.re).collect()).collect(),
    })
}

/// Exponents as complex numbers.
pub fn to_complex(u: &[Rat]) -> Vec<C> {
    u.iter().map(|r| C::new(rat_to_f64(r), 0.0)).collect()
}
