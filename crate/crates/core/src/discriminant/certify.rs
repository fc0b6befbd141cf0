use num_complex::Complex64 as C;
use num_traits::Zero;
use rand::Rng as _;
use rayon::prelude::*;

use crate::arrangement::Arrangement;
use crate::critical::{aberth_roots, membership_numeric, Membership, Tolerances};
use crate::error::Result;
use crate::poly::Poly;
use crate::rational::{rat_from_f64, rat_to_f64, ratio, Rat};
use crate::rng::{substream_n, Rng};

type Cq = (Rat, Rat);

fn cmul(a: &Cq, b: &Cq) -> Cq {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn cdiv(a: &Cq, b: &Cq) -> Cq {
    let den = &b.0 * &b.0 + &b.1 * &b.1;
    ((&a.0 * &b.0 + &a.1 * &b.1) / &den, (&a.1 * &b.0 - &a.0 * &b.1) / den)
}

/// Value and derivative of `sum c_k z^k` at `z`, exactly.
fn horner(c: &[Rat], z: &Cq) -> (Cq, Cq) {
    let mut p: Cq = (Rat::zero(), Rat::zero());
    let mut dp: Cq = (Rat::zero(), Rat::zero());
    for ck in c.iter().rev() {
        let t = cmul(&dp, z);
        dp = (t.0 + &p.0, t.1 + &p.1);
        let t = cmul(&p, z);
        p = (t.0 + ck, t.1);
    }
    (p, dp)
}

fn to_cq(z: C) -> Cq {
    (rat_from_f64(z.re), rat_from_f64(z.im))
}

/// A random point on `{f = 0}`: all coordinates but one are random
/// rationals, the last is a root of the restriction, polished by exact
/// Newton steps and rounded to double precision.
pub fn zero_locus_sample(f: &Poly, rng: &mut Rng) -> Option<Vec<C>> {
    let support = f.support_vars();
    if support.is_empty() {
        return None;
    }
    for _ in 0..20 {
        let k = support[rng.gen_range(0..support.len())];
        let vals: Vec<Rat> = (0..f.nvars())
            .map(|_| loop {
                let r = ratio(rng.gen_range(-40..=40), rng.gen_range(1..=9));
                if !r.is_zero() {
                    break r;
                }
            })
            .collect();
        let mut coeffs: Vec<Rat> = vec![Rat::zero(); f.degree_in(k) as usize + 1];
        for (m, c) in f.terms() {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if i != k && e > 0 {
                    t *= vals[i].pow(e as i32);
                }
            }
            coeffs[m.0[k] as usize] += t;
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            continue;
        }
        let cf: Vec<C> = coeffs.iter().map(|c| C::new(rat_to_f64(c), 0.0)).collect();
        let (roots, _) = aberth_roots(&cf);
        if roots.is_empty() {
            continue;
        }
        let mut z = to_cq(roots[rng.gen_range(0..roots.len())]);
        for _ in 0..4 {
            let (p, dp) = horner(&coeffs, &z);
            if dp.0.is_zero() && dp.1.is_zero() {
                break;
            }
            let step = cdiv(&p, &dp);
            let next = C::new(rat_to_f64(&(&z.0 - &step.0)), rat_to_f64(&(&z.1 - &step.1)));
            z = to_cq(next);
        }
        let root = C::new(rat_to_f64(&z.0), rat_to_f64(&z.1));
        let mut u: Vec<C> = vals.iter().map(|v| C::new(rat_to_f64(v), 0.0)).collect();
        u[k] = root;
        return Some(u);
    }
    None
}

/// Samples `samples` points on `{f = 0}` and counts how many the numerical
/// membership test places near the discriminant of `arr`.
pub fn certify_factor(arr: &Arrangement, f: &Poly, seed: u64, samples: usize, tol: &Tolerances) -> Result<usize> {
    let verdicts: Vec<Result<bool>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = substream_n(seed, "certify", s as u64);
            let Some(u) = zero_locus_sample(f, &mut rng) else { return Ok(false) };
            let m = membership_numeric(arr, &u, seed ^ (s as u64).wrapping_mul(0x2545_F491_4F6C_DD1D), tol)?;
            Ok(m.verdict == Membership::NearDiscriminant)
        })
        .collect();
    let mut near = 0;
    for v in verdicts {
        if v? {
            near += 1;
        }
    }
    Ok(near)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{m05_discriminant, m0m_arrangement};
    use crate::rng::substream;

    #[test]
    fn samples_lie_on_the_zero_set() {
        let (arr, _) = m0m_arrangement(5).unwrap();
        let f = m05_discriminant(&arr.u_vars());
        let mut rng = substream(4, "zl");
        for _ in 0..10 {
            let u = zero_locus_sample(&f, &mut rng).unwrap();
            let scale = u.iter().map(|z| z.norm()).fold(0.0, f64::max).powi(4);
            assert!(f.eval_c64(&u).unwrap().norm() < 1e-10 * scale);
        }
    }

    #[test]
    fn m05_factor_certifies() {
        let (arr, _) = m0m_arrangement(5).unwrap();
        let f = m05_discriminant(&arr.u_vars());
        assert_eq!(certify_factor(&arr, &f, 0, 3, &Tolerances::default()).unwrap(), 3);
    }
}
