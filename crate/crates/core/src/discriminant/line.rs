use super::{subset_sum, DiscriminantResult, Factor, Method};
use crate::error::{Error, Result};
use crate::poly::modular::{self, upoly, Fe, Field, ModPoly};
use crate::poly::{sylvester_resultant, trial_divide, univariate_discriminant, var_names, Poly, ResultantPath};
use crate::rational::Rat;
use crate::rng::substream;
use rand::Rng as _;

/// `(g1, g2)` in the variables `u0..un, x`: the numerators of
/// `sum u_i / (x - p_i)` and of `sum u_i / (x - p_i)^2`.
pub fn point_forms(points: &[Rat]) -> (Poly, Poly) {
    let n1 = points.len();
    let mut vars = var_names("u", n1);
    vars.push("x".into());
    let lin: Vec<Poly> = points.iter().map(|p| Poly::var(&vars, "x").sub(&Poly::constant(&vars, p.clone()))).collect();
    let mut prefix = vec![Poly::one(&vars)];
    for l in &lin {
        let next = prefix.last().unwrap().mul(l);
        prefix.push(next);
    }
    let mut suffix = vec![Poly::one(&vars); n1 + 1];
    for i in (0..n1).rev() {
        suffix[i] = suffix[i + 1].mul(&lin[i]);
    }
    let mut g1 = Poly::zero(&vars);
    let mut g2 = Poly::zero(&vars);
    for i in 0..n1 {
        let others = prefix[i].mul(&suffix[i + 1]);
        let ui = Poly::var(&vars, &vars[i]);
        g1 = g1.add(&ui.mul(&others));
        g2 = g2.add(&ui.mul(&others.mul(&others)));
    }
    (g1, g2)
}

fn check_points(points: &[Rat]) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(Error::RepeatedHyperplane(i, j));
            }
        }
    }
    if points.len() < 2 {
        return Err(Error::Invalid(format!("need at least 2 points, got {}", points.len())));
    }
    Ok(())
}

/// `Disc_x(g1)`, canonically scaled.
pub fn d1_disc_route(points: &[Rat]) -> Result<Poly> {
    check_points(points)?;
    let (g1, _) = point_forms(points);
    let disc = univariate_discriminant(&g1, "x", ResultantPath::Auto)?;
    disc.with_vars(&var_names("u", points.len())).canonicalize()
}

/// `Res_x(g1, g2)` with the factors `u_i` and `u_0 + ... + u_n` stripped.
/// The quotient by one copy of each factor is interpolated modularly, any
/// further copies are found by trial division, and the factorization is
/// checked exactly at random rational points. Returns the canonical quotient
/// and the multiplicities of the stripped factors in that order.
pub fn d1_res_route(points: &[Rat]) -> Result<(Poly, Vec<u32>)> {
    check_points(points)?;
    let n1 = points.len();
    let (g1, g2) = point_forms(points);
    let vars = var_names("u", n1);
    let xi = n1;
    let c1: Vec<Poly> = g1.coeffs_in(xi).iter().map(|c| c.remove_var(xi)).collect();
    let c2: Vec<Poly> = g2.coeffs_in(xi).iter().map(|c| c.remove_var(xi)).collect();
    let n = (n1 - 1) as u32;
    let prepare = |fd: &Field| -> Option<(Vec<ModPoly>, Vec<ModPoly>)> {
        let a = c1.iter().map(|c| ModPoly::new(fd, c)).collect::<Option<Vec<_>>>()?;
        let b = c2.iter().map(|c| ModPoly::new(fd, c)).collect::<Option<Vec<_>>>()?;
        Some((a, b))
    };
    let eval = |fd: &Field, st: &(Vec<ModPoly>, Vec<ModPoly>), pt: &[Fe]| -> Option<Fe> {
        let mut lin = pt.iter().fold(fd.one(), |acc, &v| fd.mul(acc, v));
        lin = fd.mul(lin, pt.iter().fold(0, |acc, &v| fd.add(acc, v)));
        if lin == 0 {
            return None;
        }
        let a: Vec<Fe> = st.0.iter().map(|c| c.eval(fd, pt)).collect();
        let b: Vec<Fe> = st.1.iter().map(|c| c.eval(fd, pt)).collect();
        Some(fd.mul(upoly::resultant(fd, &a, &b), fd.inv(lin)))
    };
    let q = modular::interpolate_homogeneous(&vars, 2 * n - 2, prepare, eval)?;
    let strip: Vec<Poly> = (0..n1).map(|i| Poly::var(&vars, &vars[i])).chain([subset_sum(&vars, (1u64 << n1) - 1)]).collect();
    let mut r = q.clone();
    let mut mult = Vec::with_capacity(n1 + 1);
    for l in &strip {
        let (next, k) = trial_divide(&r, l);
        r = next;
        mult.push(k + 1);
    }
    let mut rng = substream(0, "d1-res-check");
    let mut ratio: Option<Rat> = None;
    for _ in 0..3 {
        let u: Vec<Rat> = (0..n1).map(|_| Rat::from_integer(rng.gen_range(1i64..=1000).into())).collect();
        let at = |c: &[Poly]| -> Result<Poly> {
            let terms: Result<Vec<(Vec<u32>, Rat)>> = c.iter().enumerate().map(|(k, p)| Ok((vec![k as u32], p.eval(&u)?))).collect();
            Ok(Poly::from_terms(&["x".to_string()], terms?))
        };
        let full = sylvester_resultant(&at(&c1)?, &at(&c2)?, "x", ResultantPath::Direct)?.eval(&[])?;
        let lin = strip.iter().try_fold(Rat::from_integer(1.into()), |acc, l| l.eval(&u).map(|v| acc * v))?;
        let here = full / (q.eval(&u)? * lin);
        if ratio.get_or_insert_with(|| here.clone()) != &here {
            return Err(Error::Invalid("internal: resultant does not factor as expected".into()));
        }
    }
    Ok((r.canonicalize()?, mult))
}

/// Logarithmic discriminant of `n+1` distinct points on the line, by the
/// discriminant route and cross-checked against the resultant route.
pub fn logdisc_d1(points: &[Rat]) -> Result<DiscriminantResult> {
    check_points(points)?;
    let vars = var_names("u", points.len());
    if points.len() == 2 {
        return Ok(DiscriminantResult::new(
            &vars,
            vec![],
            vec![],
            Method::DiscD1,
            vec!["two points: the discriminant is empty (constant 1)".into()],
        ));
    }
    let disc = d1_disc_route(points)?;
    let (res, mult) = d1_res_route(points)?;
    if res != disc || mult.iter().any(|&k| k != 1) {
        return Err(Error::Invalid(format!(
            "internal: discriminant and resultant routes disagree (stripped multiplicities {mult:?})"
        )));
    }
    let notes = vec![format!(
        "resultant route agrees after stripping {} linear factors",
        mult.len()
    )];
    let factor = Factor { poly: disc, multiplicity: 1, certified: true, samples: 0, near: 0 };
    Ok(DiscriminantResult::new(&vars, vec![factor], vec![], Method::DiscD1, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::quadric_discriminant;
    use crate::rational::{rat, ratio};

    #[test]
    fn three_points_quadric() {
        for b in [rat(3), ratio(-2, 5), ratio(7, 3)] {
            let pts = vec![rat(0), rat(-1), -b.clone()];
            let r = logdisc_d1(&pts).unwrap();
            assert_eq!(r.factors.len(), 1);
            let vars = var_names("u", 3);
            let bm1 = &b - rat(1);
            let raw = Poly::from_terms(
                &vars,
                [
                    (vec![2, 0, 0], &bm1 * &bm1),
                    (vec![1, 1, 0], rat(2) * &b * &bm1),
                    (vec![0, 2, 0], &b * &b),
                    (vec![1, 0, 1], rat(-2) * &bm1),
                    (vec![0, 1, 1], rat(2) * &b),
                    (vec![0, 0, 2], rat(1)),
                ],
            );
            assert_eq!(r.factors[0].poly, raw.canonicalize().unwrap());
            assert_eq!(quadric_discriminant(&raw).unwrap(), rat(-4) * &b * &b * &bm1 * &bm1);
        }
    }

    #[test]
    fn four_points_quartic() {
        let r = logdisc_d1(&[rat(0), rat(1), rat(2), rat(3)]).unwrap();
        let f = &r.factors[0].poly;
        assert_eq!(f.total_degree(), Some(4));
        assert!(f.is_homogeneous());
        assert_eq!(r.total_degree, 4);
    }

    #[test]
    fn two_points_empty() {
        let r = logdisc_d1(&[rat(0), rat(1)]).unwrap();
        assert!(r.factors.is_empty());
        assert_eq!(r.product(&var_names("u", 2)), Poly::one(&var_names("u", 2)));
    }

    #[test]
    fn repeated_points() {
        assert_eq!(logdisc_d1(&[rat(0), rat(1), rat(0)]).unwrap_err(), Error::RepeatedHyperplane(0, 2));
    }

    #[test]
    fn res_route_multiplicities() {
        let (_, mult) = d1_res_route(&[rat(0), rat(2), ratio(1, 3), rat(-4)]).unwrap();
        assert_eq!(mult, vec![1; 5]);
    }
}
