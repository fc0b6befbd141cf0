use num_traits::Zero;
use rand::Rng as _;

use super::subset_sum;
use crate::poly::{trial_divide, Poly};
use crate::rational::{ratio, Rat};
use crate::rng::Rng;

/// Splits `f` into canonical factors with multiplicities, using trial
/// division by the coordinates and by all 0/1 coordinate sums, then splits
/// products of polynomials in disjoint sets of variables.
pub fn split_factors(f: &Poly, rng: &mut Rng) -> Vec<(Poly, u32)> {
    let vars = f.vars().to_vec();
    let n = vars.len();
    let mut rest = f.clone();
    let mut out: Vec<(Poly, u32)> = Vec::new();
    if n <= 12 {
        let mut masks: Vec<u64> = (1..1u64 << n).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        for mask in masks {
            if rest.total_degree().unwrap_or(0) == 0 {
                break;
            }
            let l = subset_sum(&vars, mask);
            let (q, k) = trial_divide(&rest, &l);
            if k > 0 {
                rest = q;
                out.push((l.canonicalize().expect("nonzero form"), k));
            }
        }
    }
    let mut pending = vec![(rest, 1u32)];
    while let Some((g, k)) = pending.pop() {
        if g.total_degree().unwrap_or(0) == 0 {
            continue;
        }
        match separate(&g, rng) {
            Some((a, b)) => {
                pending.push((a, k));
                pending.push((b, k));
            }
            None => out.push((g.canonicalize().expect("nonzero factor"), k)),
        }
    }
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (p, k) in out {
        match merged.iter_mut().find(|(q, _)| *q == p) {
            Some((_, m)) => *m += k,
            None => merged.push((p, k)),
        }
    }
    merged
}

fn random_point(n: usize, rng: &mut Rng) -> Vec<Rat> {
    (0..n).map(|_| ratio(rng.gen_range(-97..=97), rng.gen_range(1..=13))).collect()
}

fn mix(p: &[Rat], c: &[Rat], side: &[bool]) -> Vec<Rat> {
    p.iter().zip(c).zip(side).map(|((p, c), &s)| if s { p.clone() } else { c.clone() }).collect()
}

/// `g = a(u_S) * b(u_{S^c})` for some split of its support, if one exists.
fn separate(g: &Poly, rng: &mut Rng) -> Option<(Poly, Poly)> {
    let support = g.support_vars();
    let s = support.len();
    if !(2..=20).contains(&s) {
        return None;
    }
    let n = g.nvars();
    let c = loop {
        let c = random_point(n, rng);
        if !g.eval(&c).ok()?.is_zero() {
            break c;
        }
    };
    let gc = g.eval(&c).ok()?;
    let probes: Vec<Vec<Rat>> = (0..2).map(|_| random_point(n, rng)).collect();
    for mask in 1u64..(1u64 << (s - 1)) {
        let mut side = vec![false; n];
        for (bit, &v) in support.iter().enumerate() {
            side[v] = mask >> bit & 1 == 1;
        }
        let other: Vec<bool> = side.iter().map(|&x| !x).collect();
        let holds = probes.iter().all(|p| {
            let lhs = g.eval(p).unwrap() * &gc;
            let rhs = g.eval(&mix(p, &c, &side)).unwrap() * g.eval(&mix(p, &c, &other)).unwrap();
            lhs == rhs
        });
        if !holds {
            continue;
        }
        let mut a = g.clone();
        let mut b = g.clone();
        for (i, var) in g.vars().iter().enumerate() {
            if side[i] {
                b = b.specialize(var, &c[i]);
            } else {
                a = a.specialize(var, &c[i]);
            }
        }
        if a.mul(&b) == g.scale(&gc) {
            return Some((a, b));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_expr, var_names};
    use crate::rng::substream;

    #[test]
    fn splits_disjoint_quadrics() {
        let v = var_names("u", 6);
        let q1 = parse_expr(&v, "144*u0^2+120*u0*u1+168*u0*u2+25*u1^2-70*u1*u2+49*u2^2").unwrap();
        let q2 = parse_expr(&v, "u3^2-2*u3*u4+4*u3*u5+u4^2+4*u4*u5+4*u5^2").unwrap();
        let mut rng = substream(0, "split");
        let f = q1.mul(&q2).scale(&ratio(-3, 7));
        let mut parts = split_factors(&f, &mut rng);
        parts.sort_by_key(|(p, _)| p.to_text());
        let mut want = vec![(q1, 1), (q2, 1)];
        want.sort_by_key(|(p, _)| p.to_text());
        assert_eq!(parts, want);
    }

    #[test]
    fn strips_linear_forms() {
        let v = var_names("u", 3);
        let p = |e: &str| parse_expr(&v, e).unwrap();
        let f = p("u0^2").mul(&p("u0+u1+u2")).mul(&p("u1^2+u0*u2+u2^2"));
        let mut rng = substream(1, "split");
        let parts = split_factors(&f, &mut rng);
        assert_eq!(parts.len(), 3);
        assert!(parts.contains(&(parse_expr(&v, "u0").unwrap(), 2)));
        assert!(parts.contains(&(parse_expr(&v, "u0+u1+u2").unwrap(), 1)));
    }

    #[test]
    fn irreducible_stays_whole() {
        let v = var_names("u", 4);
        let f = parse_expr(&v, "u0*u1 - u2*u3 + u0^2").unwrap();
        let mut rng = substream(2, "split");
        assert_eq!(split_factors(&f, &mut rng), vec![(f.canonicalize().unwrap(), 1)]);
    }
}
