use super::modular::{self, det_mod, Fe, Field, ModPoly};
use super::Poly;
use crate::error::{Error, Result};
use crate::linalg::{bareiss_det, det};
use crate::rational::{binomial, Rat};

use num_traits::{One, Zero};

/// Which determinant engine computes a resultant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ResultantPath {
    /// Direct below a size threshold, modular above it.
    #[default]
    Auto,
    Direct,
    Modular,
}

const DIRECT_TERM_LIMIT: u128 = 300;

fn aligned_main(f: &Poly, g: &Poly, var: &str) -> Result<(Poly, Poly, usize)> {
    let vars = f.merged_vars(g);
    let f = f.with_vars(&vars);
    let g = g.with_vars(&vars);
    let idx = vars.iter().position(|v| v == var);
    match idx {
        Some(i) if f.degree_in(i) + g.degree_in(i) > 0 => Ok((f, g, i)),
        _ => Err(Error::ConstantInMainVar(var.to_string())),
    }
}

/// Sylvester matrix of `f` and `g` in `var`, rows of `f` first.
pub fn sylvester_matrix(f: &Poly, g: &Poly, var: &str) -> Result<Vec<Vec<Poly>>> {
    let (f, g, idx) = aligned_main(f, g, var)?;
    let cf = f.coeffs_in(idx);
    let cg = g.coeffs_in(idx);
    Ok(sylvester_from_coeffs(&cf, &cg, &Poly::zero(f.vars())))
}

fn sylvester_from_coeffs<T: Clone>(cf: &[T], cg: &[T], zero: &T) -> Vec<Vec<T>> {
    let m = cf.len() - 1;
    let n = cg.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![zero.clone(); size];
        for k in 0..=m {
            r[i + k] = cf[m - k].clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![zero.clone(); size];
        for k in 0..=n {
            r[i + k] = cg[n - k].clone();
        }
        rows.push(r);
    }
    rows
}

/// `Res_var(f, g)` as a polynomial in the remaining variables.
pub fn sylvester_resultant(f: &Poly, g: &Poly, var: &str, path: ResultantPath) -> Result<Poly> {
    match path {
        ResultantPath::Direct => sylvester_resultant_direct(f, g, var),
        ResultantPath::Modular => sylvester_resultant_modular(f, g, var),
        ResultantPath::Auto => {
            let (f2, g2, idx) = aligned_main(f, g, var)?;
            let est = output_estimate(&f2.coeffs_in(idx), &g2.coeffs_in(idx), 0, f2.nvars() - 1);
            if est <= DIRECT_TERM_LIMIT {
                sylvester_resultant_direct(f, g, var)
            } else {
                sylvester_resultant_modular(f, g, var)
            }
        }
    }
}

/// Resultant by fraction-free elimination over the polynomial ring.
pub fn sylvester_resultant_direct(f: &Poly, g: &Poly, var: &str) -> Result<Poly> {
    let (f, g, idx) = aligned_main(f, g, var)?;
    if f.is_zero() || g.is_zero() {
        return Ok(Poly::zero(f.vars()).remove_var(idx));
    }
    let m = sylvester_matrix(&f, &g, var)?;
    Ok(bareiss_det(m).remove_var(idx))
}

/// Resultant by evaluation/interpolation modulo many primes.
pub fn sylvester_resultant_modular(f: &Poly, g: &Poly, var: &str) -> Result<Poly> {
    let (f, g, idx) = aligned_main(f, g, var)?;
    if f.is_zero() || g.is_zero() || f.nvars() == 1 {
        return sylvester_resultant_direct(&f, &g, var);
    }
    let cf: Vec<Poly> = f.coeffs_in(idx).iter().map(|c| c.remove_var(idx)).collect();
    let cg: Vec<Poly> = g.coeffs_in(idx).iter().map(|c| c.remove_var(idx)).collect();
    let rest: Vec<String> = cf[0].vars().to_vec();
    let prepare = |fd: &Field| -> Option<(Vec<ModPoly>, Vec<ModPoly>)> {
        let a = cf.iter().map(|c| ModPoly::new(fd, c)).collect::<Option<Vec<_>>>()?;
        let b = cg.iter().map(|c| ModPoly::new(fd, c)).collect::<Option<Vec<_>>>()?;
        Some((a, b))
    };
    let eval = |fd: &Field, st: &(Vec<ModPoly>, Vec<ModPoly>), pt: &[Fe]| -> Option<Fe> {
        let a: Vec<Fe> = st.0.iter().map(|c| c.eval(fd, pt)).collect();
        let b: Vec<Fe> = st.1.iter().map(|c| c.eval(fd, pt)).collect();
        Some(det_mod(fd, sylvester_from_coeffs(&a, &b, &0)))
    };
    match homogeneous_degree(&cf, &cg, 0) {
        Some(d) => modular::interpolate_homogeneous(&rest, d, prepare, eval),
        None => modular::interpolate_dense(&rest, dense_bound(&cf, &cg), prepare, eval),
    }
}

fn hom_degree(p: &Poly) -> Option<u32> {
    if p.is_homogeneous() {
        p.total_degree()
    } else {
        None
    }
}

/// Degree of the resultant (minus `sub`) when it is forced to be homogeneous.
fn homogeneous_degree(cf: &[Poly], cg: &[Poly], sub: u32) -> Option<u32> {
    let m = (cf.len() - 1) as i64;
    let n = (cg.len() - 1) as i64;
    for s in [0i64, 1] {
        let weight = |cs: &[Poly]| -> Option<i64> {
            let mut a = None;
            for (k, c) in cs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let d = hom_degree(c)? as i64 + s * k as i64;
                match a {
                    None => a = Some(d),
                    Some(x) if x == d => {}
                    _ => return None,
                }
            }
            a
        };
        if let (Some(af), Some(ag)) = (weight(cf), weight(cg)) {
            let d = af * n + ag * m - s * m * n - sub as i64;
            if d >= 0 {
                return Some(d as u32);
            }
        }
    }
    None
}

fn dense_bound(cf: &[Poly], cg: &[Poly]) -> u32 {
    let m = (cf.len() - 1) as u32;
    let n = (cg.len() - 1) as u32;
    let mx = |cs: &[Poly]| cs.iter().filter_map(|c| c.total_degree()).max().unwrap_or(0);
    n * mx(cf) + m * mx(cg)
}

fn output_estimate(cf: &[Poly], cg: &[Poly], sub: u32, nrest: usize) -> u128 {
    if nrest == 0 {
        return 1;
    }
    let cf: Vec<Poly> = cf.to_vec();
    match homogeneous_degree(&cf, cg, sub) {
        Some(d) => binomial(d as usize + nrest - 1, nrest - 1),
        None => binomial(dense_bound(&cf, cg) as usize + nrest, nrest),
    }
}

fn disc_sign(n: u32) -> Rat {
    if (n as u64 * (n as u64 - 1) / 2) % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

fn check_disc_input(f: &Poly, var: &str) -> Result<usize> {
    let idx = f.var_index(var);
    let deg = idx.map_or(0, |i| f.degree_in(i));
    if deg < 2 {
        return Err(Error::DegreeTooLow { var: var.to_string(), degree: deg as usize, needed: 2 });
    }
    Ok(idx.unwrap())
}

/// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)` in `var`.
pub fn univariate_discriminant(f: &Poly, var: &str, path: ResultantPath) -> Result<Poly> {
    match path {
        ResultantPath::Direct => univariate_discriminant_direct(f, var),
        ResultantPath::Modular => univariate_discriminant_modular(f, var),
        ResultantPath::Auto => {
            let idx = check_disc_input(f, var)?;
            let cf = f.coeffs_in(idx);
            let cd = f.derivative(var).coeffs_in(idx);
            let lcd = cf.last().unwrap().total_degree().unwrap_or(0);
            if output_estimate(&cf, &cd, lcd, f.nvars() - 1) <= DIRECT_TERM_LIMIT {
                univariate_discriminant_direct(f, var)
            } else {
                univariate_discriminant_modular(f, var)
            }
        }
    }
}

pub fn univariate_discriminant_direct(f: &Poly, var: &str) -> Result<Poly> {
    let idx = check_disc_input(f, var)?;
    let n = f.degree_in(idx);
    let r = sylvester_resultant_direct(f, &f.derivative(var), var)?;
    let lc = f.coeffs_in(idx).pop().unwrap().remove_var(idx);
    let q = r.div_exact(&lc).expect("leading coefficient divides Res(f, f')");
    Ok(q.scale(&disc_sign(n)))
}

pub fn univariate_discriminant_modular(f: &Poly, var: &str) -> Result<Poly> {
    let idx = check_disc_input(f, var)?;
    if f.nvars() == 1 {
        return univariate_discriminant_direct(f, var);
    }
    let n = f.degree_in(idx);
    let cf: Vec<Poly> = f.coeffs_in(idx).iter().map(|c| c.remove_var(idx)).collect();
    let cd: Vec<Poly> = f.derivative(var).coeffs_in(idx)[..n as usize].iter().map(|c| c.remove_var(idx)).collect();
    let rest: Vec<String> = cf[0].vars().to_vec();
    let sign = disc_sign(n);
    let lcdeg = cf.last().unwrap().total_degree().unwrap_or(0);
    let prepare = |fd: &Field| -> Option<(Vec<ModPoly>, Vec<ModPoly>, Fe)> {
        let a = cf.iter().map(|c| ModPoly::new(fd, c)).collect::<Option<Vec<_>>>()?;
        let b = cd.iter().map(|c| ModPoly::new(fd, c)).collect::<Option<Vec<_>>>()?;
        Some((a, b, fd.from_rat(&sign)?))
    };
    let eval = |fd: &Field, st: &(Vec<ModPoly>, Vec<ModPoly>, Fe), pt: &[Fe]| -> Option<Fe> {
        let a: Vec<Fe> = st.0.iter().map(|c| c.eval(fd, pt)).collect();
        let b: Vec<Fe> = st.1.iter().map(|c| c.eval(fd, pt)).collect();
        let lc = *a.last().unwrap();
        if lc == 0 {
            return None;
        }
        let r = det_mod(fd, sylvester_from_coeffs(&a, &b, &0));
        Some(fd.mul(fd.mul(r, fd.inv(lc)), st.2))
    };
    match homogeneous_degree(&cf, &cd, lcdeg) {
        Some(d) if cf.last().unwrap().is_homogeneous() => modular::interpolate_homogeneous(&rest, d, prepare, eval),
        _ => {
            let bound = dense_bound(&cf, &cd).saturating_sub(0);
            modular::interpolate_dense(&rest, bound, prepare, eval)
        }
    }
}

/// Largest `k` with `g^k | f`, and `f / g^k`.
pub fn trial_divide(f: &Poly, g: &Poly) -> (Poly, u32) {
    if g.is_zero() || g.is_constant() || f.is_zero() {
        return (f.clone(), 0);
    }
    let mut q = f.clone();
    let mut k = 0;
    while let Some(next) = q.div_exact(g) {
        q = next;
        k += 1;
    }
    (q, k)
}

/// Determinant of the symmetric matrix of a quadratic form.
pub fn quadric_discriminant(q: &Poly) -> Result<Rat> {
    if !q.is_zero() && (!q.is_homogeneous() || q.total_degree() != Some(2)) {
        return Err(Error::Invalid("expected a quadratic form".into()));
    }
    let n = q.nvars();
    let half = Rat::new(1.into(), 2.into());
    let mut m = vec![vec![Rat::zero(); n]; n];
    for (e, c) in q.terms() {
        let idx: Vec<usize> = (0..n).filter(|&i| e.0[i] > 0).collect();
        if idx.len() == 1 {
            m[idx[0]][idx[0]] = c.clone();
        } else {
            m[idx[0]][idx[1]] = c * &half;
            m[idx[1]][idx[0]] = c * &half;
        }
    }
    Ok(det(&m))
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::poly::Poly;
    use crate::rational::{rat, ratio};
    use proptest::prelude::*;

    fn vars() -> Vec<String> {
        ["x", "a", "b"].iter().map(|s| s.to_string()).collect()
    }

    /// Polynomials in x, a, b with x-degree exactly `dx` and small coefficients.
    fn poly_strategy(dx: u32) -> impl Strategy<Value = Poly> {
        let cells = ((dx + 1) * 6) as usize;
        proptest::collection::vec(-3i64..=3, cells).prop_map(move |cs| {
            let mut terms = Vec::new();
            let mut it = cs.into_iter();
            for k in 0..=dx {
                for (ea, eb) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
                    let c = it.next().unwrap();
                    terms.push((vec![k, ea, eb], rat(c)));
                }
            }
            terms.push((vec![dx, 0, 0], rat(5)));
            Poly::from_terms(&vars(), terms)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn resultant_antisymmetry(f in poly_strategy(2), g in poly_strategy(1)) {
            let fg = sylvester_resultant_direct(&f, &g, "x").unwrap();
            let gf = sylvester_resultant_direct(&g, &f, "x").unwrap();
            let m = f.degree_in(0) * g.degree_in(0);
            let sign = if m % 2 == 0 { rat(1) } else { rat(-1) };
            prop_assert_eq!(fg, gf.scale(&sign));
        }

        #[test]
        fn resultant_multiplicative(f in poly_strategy(1), g in poly_strategy(1), h in poly_strategy(1)) {
            let lhs = sylvester_resultant_direct(&f, &g.mul(&h), "x").unwrap();
            let rhs = sylvester_resultant_direct(&f, &g, "x").unwrap().mul(&sylvester_resultant_direct(&f, &h, "x").unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn modular_matches_direct(f in poly_strategy(2), g in poly_strategy(2)) {
            prop_assert_eq!(
                sylvester_resultant_direct(&f, &g, "x").unwrap(),
                sylvester_resultant_modular(&f, &g, "x").unwrap()
            );
        }

        #[test]
        fn discriminant_paths_agree(f in poly_strategy(3)) {
            prop_assert_eq!(
                univariate_discriminant_direct(&f, "x").unwrap(),
                univariate_discriminant_modular(&f, "x").unwrap()
            );
        }

        #[test]
        fn square_has_zero_discriminant(f in poly_strategy(1)) {
            prop_assert!(univariate_discriminant_direct(&f.mul(&f), "x").unwrap().is_zero());
        }

        #[test]
        fn distinct_linear_factors(roots in proptest::collection::btree_set(-20i64..20, 2..5)) {
            let v = vec!["x".to_string()];
            let x = Poly::var(&v, "x");
            let f = roots.iter().fold(Poly::one(&v), |acc, &r| acc.mul(&x.sub(&Poly::constant(&v, rat(r)))));
            prop_assert!(!univariate_discriminant_direct(&f, "x").unwrap().is_zero());
        }

        #[test]
        fn canonicalize_idempotent_and_scale_free(f in poly_strategy(2), n in 1i64..50, d in 1i64..50, neg in any::<bool>()) {
            prop_assume!(!f.is_zero());
            let c = f.canonicalize().unwrap();
            prop_assert_eq!(c.canonicalize().unwrap(), c.clone());
            let s = if neg { ratio(-n, d) } else { ratio(n, d) };
            prop_assert_eq!(f.scale(&s).canonicalize().unwrap(), c);
        }
    }
}
