//! Reciprocal linear spaces: kernel bases, circuit generators and the
//! Plücker substitution.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::{det, nullspace, rank, select_rows, transpose};
use crate::poly::{var_names, Poly, PolyDoc};
use crate::rational::{format_rat, subsets, Rat};

/// Basis of `ker(A^T)` as the columns of an `(n+1) x (n+1-d)` matrix.
///
/// The basis is in reduced echelon form: each column has a one at its own
/// free row and zeros at the other free rows.
pub fn kernel_basis(a: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let n1 = a.len();
    let d = a.first().map_or(0, |r| r.len());
    if rank(a) < d {
        return Err(Error::RankDeficient(format!("linear part has rank {} < {d}", rank(a))));
    }
    let at = transpose(a);
    let basis = nullspace(&at, n1);
    Ok((0..n1).map(|i| basis.iter().map(|v| v[i].clone()).collect()).collect())
}

#[derive(Clone, Debug)]
pub struct CircuitGenerator {
    pub support: Vec<usize>,
    pub lambda: Vec<Rat>,
    pub poly: Poly,
}

impl CircuitGenerator {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "support": self.support,
            "lambda": self.lambda.iter().map(format_rat).collect::<Vec<_>>(),
            "poly": PolyDoc::from(&self.poly),
            "text": self.poly.to_text(),
        })
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CircuitReport {
    #[serde(skip)]
    pub generators: Vec<CircuitGenerator>,
    pub warnings: Vec<String>,
}

/// One generator per `(d+2)`-subset `T` whose circuit has full support:
/// `g_T = sum_{i in T} lambda_i prod_{j in T, j != i} y_j` with
/// `sum_{i in T} lambda_i l_i = 0`.
pub fn circuit_generators(arr: &Arrangement) -> Result<CircuitReport> {
    let n1 = arr.n_plus_1();
    let d = arr.d();
    let l = arr.l_rows();
    let y = var_names("y", n1);
    let mut report = CircuitReport::default();
    for t in subsets(n1, d + 2) {
        let cols = transpose(&select_rows(&l, &t));
        let ker = nullspace(&cols, t.len());
        if ker.len() != 1 {
            report.warnings.push(format!("support {t:?}: circuit space has dimension {}", ker.len()));
            continue;
        }
        let lambda = ker.into_iter().next().unwrap();
        if lambda.iter().any(|x| x.is_zero()) {
            report.warnings.push(format!("support {t:?}: circuit does not use every index"));
            continue;
        }
        let mut g = Poly::zero(&y);
        for (pos, &i) in t.iter().enumerate() {
            let mut e = vec![0u32; n1];
            for &j in &t {
                if j != i {
                    e[j] = 1;
                }
            }
            g = g.add(&Poly::monomial(&y, e, lambda[pos].clone()));
        }
        let poly = g.canonicalize()?;
        let (lm, lc) = poly.leading_term().expect("nonzero generator");
        let scale = lc / g.coeff(&lm.0);
        let lambda = lambda.iter().map(|x| x * &scale).collect();
        report.generators.push(CircuitGenerator { support: t, lambda, poly });
    }
    Ok(report)
}

/// `det(A_perp restricted to rows I) * prod_{i in I} 1/u_i`.
pub fn plucker_substitution(arr: &Arrangement, subset: &[usize], u: &[Rat]) -> Result<Rat> {
    let n1 = arr.n_plus_1();
    let k = n1 - arr.d();
    if u.len() != n1 {
        return Err(Error::Arity { expected: n1, got: u.len() });
    }
    if subset.len() != k {
        return Err(Error::Invalid(format!("index set must have {k} elements, got {}", subset.len())));
    }
    for (pos, &i) in subset.iter().enumerate() {
        if i >= n1 {
            return Err(Error::Invalid(format!("index {i} out of range")));
        }
        if subset[..pos].contains(&i) {
            return Err(Error::Invalid(format!("index {i} repeated")));
        }
    }
    if let Some(&i) = subset.iter().find(|&&i| u[i].is_zero()) {
        return Err(Error::Invalid(format!("u{i} is zero")));
    }
    let perp = kernel_basis(arr.a())?;
    let minor = det(&select_rows(&perp, subset));
    Ok(subset.iter().fold(minor, |acc, &i| acc / &u[i]))
}

/// Reciprocal point `(1/l_0(x), ..., 1/l_n(x))`.
pub fn reciprocal_point(arr: &Arrangement, x: &[Rat]) -> Result<Vec<Rat>> {
    let vals = arr.eval_forms(x)?;
    if let Some(i) = vals.iter().position(|v| v.is_zero()) {
        return Err(Error::OnHyperplane(i));
    }
    Ok(vals.iter().map(|v| Rat::one() / v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::m0m_arrangement;
    use crate::rational::{rat, ratio};
    use crate::rng::substream;
    use rand::Rng;

    fn mat_mul_t(a: &[Vec<Rat>], k: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
        let d = a[0].len();
        let c = k[0].len();
        (0..d)
            .map(|j| (0..c).map(|m| a.iter().zip(k).map(|(ar, kr)| &ar[j] * &kr[m]).sum()).collect())
            .collect()
    }

    #[test]
    fn simplex_kernel() {
        let arr = Arrangement::simplex(3);
        let k = kernel_basis(arr.a()).unwrap();
        assert_eq!(k.len(), 4);
        assert_eq!(k[0].len(), 1);
        let v: Vec<Rat> = k.iter().map(|r| r[0].clone()).collect();
        assert_eq!(v, vec![rat(-1), rat(-1), rat(-1), rat(1)]);
    }

    #[test]
    fn m05_kernel() {
        let (arr, _) = m0m_arrangement(5).unwrap();
        let k = kernel_basis(arr.a()).unwrap();
        assert_eq!(k[0].len(), 3);
        assert!(mat_mul_t(arr.a(), &k).iter().flatten().all(|x| x.is_zero()));
        assert_eq!(rank(&k), 3);
    }

    #[test]
    fn uniform_kernel_minors() {
        let mut rng = substream(5, "perp");
        for _ in 0..5 {
            let arr = Arrangement::random_doubly_uniform(2, 6, &mut rng);
            let k = kernel_basis(arr.a()).unwrap();
            for s in subsets(6, 4) {
                assert!(!det(&select_rows(&k, &s)).is_zero());
            }
        }
        let (m05, _) = m0m_arrangement(5).unwrap();
        let k = kernel_basis(m05.a()).unwrap();
        assert!(subsets(5, 3).iter().any(|s| det(&select_rows(&k, s)).is_zero()));
    }

    #[test]
    fn rank_deficient_kernel() {
        let a = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)], vec![rat(3), rat(6)]];
        assert!(matches!(kernel_basis(&a), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn three_points_single_quadric() {
        let arr = Arrangement::from_points(&[rat(0), rat(1), rat(3)]).unwrap();
        let r = circuit_generators(&arr).unwrap();
        assert_eq!(r.generators.len(), 1);
        let g = &r.generators[0].poly;
        assert_eq!(g.total_degree(), Some(2));
        assert_eq!(g.num_terms(), 3);
    }

    #[test]
    fn generators_vanish_on_reciprocal_points() {
        let mut rng = substream(9, "circuits");
        let arr = Arrangement::random_doubly_uniform(2, 6, &mut rng);
        let r = circuit_generators(&arr).unwrap();
        assert_eq!(r.generators.len() as u128, crate::rational::binomial(6, 4));
        assert!(r.warnings.is_empty());
        let mut tested = 0;
        while tested < 50 {
            let x: Vec<Rat> = (0..2).map(|_| ratio(rng.gen_range(-30..30), rng.gen_range(1..9))).collect();
            let Ok(y) = reciprocal_point(&arr, &x) else { continue };
            for g in &r.generators {
                assert_eq!(g.poly.num_terms(), 4);
                assert!(g.lambda.iter().all(|l| !l.is_zero()));
                assert!(g.poly.eval(&y).unwrap().is_zero());
            }
            tested += 1;
        }
    }

    #[test]
    fn plucker_values() {
        let mut rng = substream(2, "plucker");
        let arr = Arrangement::random_doubly_uniform(2, 5, &mut rng);
        let u: Vec<Rat> = (1..=5).map(rat).collect();
        for s in subsets(5, 3) {
            let v = plucker_substitution(&arr, &s, &u).unwrap();
            assert!(!v.is_zero());
            let lam = ratio(3, 2);
            let scaled: Vec<Rat> = u.iter().map(|x| x * &lam).collect();
            let w = plucker_substitution(&arr, &s, &scaled).unwrap();
            assert_eq!(w, v / lam.pow(3));
        }
        assert!(plucker_substitution(&arr, &[0, 0, 1], &u).is_err());
        let mut z = u.clone();
        z[1] = rat(0);
        assert!(plucker_substitution(&arr, &[0, 1, 2], &z).is_err());
    }
}
