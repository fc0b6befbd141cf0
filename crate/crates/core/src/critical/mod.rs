//! Critical points of the log-likelihood `sum u_i log l_i(x)`: exact gradients
//! and Hessian determinants, numerical solving, and degeneracy tests.

mod aberth;
mod homotopy;
mod numeric;
mod solve;

pub use aberth::aberth_roots;
pub use numeric::NumArrangement;
pub use solve::{
    membership_numeric, solve_critical, varchenko_check, CriticalSolutions, Membership, MembershipReport,
    PointStatus, SolveStatus, Tolerances, VarchenkoReport, to_complex,
};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::{det, select_rows};
use crate::poly::Poly;
use crate::rational::{subsets, Rat};

/// The critical equations with exact exponents, cleared of denominators.
#[derive(Clone, Debug)]
pub struct LikelihoodSystem {
    pub arr: Arrangement,
    pub u: Vec<Rat>,
    /// `sum_i u_i A_ij prod_{k != i} l_k(x)` for each coordinate `j`.
    pub cleared_equations: Vec<Poly>,
}

impl LikelihoodSystem {
    pub fn new(arr: &Arrangement, u: &[Rat]) -> Result<Self> {
        check_arity(arr, u.len())?;
        let forms = arr.forms();
        let vars = arr.x_vars();
        let others: Vec<Poly> = (0..forms.len())
            .map(|i| {
                forms
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .fold(Poly::one(&vars), |acc, (_, f)| acc.mul(f))
            })
            .collect();
        let cleared_equations = (0..arr.d())
            .map(|j| {
                (0..forms.len()).fold(Poly::zero(&vars), |acc, i| acc.add(&others[i].scale(&(&u[i] * &arr.a()[i][j]))))
            })
            .collect();
        Ok(LikelihoodSystem { arr: arr.clone(), u: u.to_vec(), cleared_equations })
    }
}

fn check_arity(arr: &Arrangement, len: usize) -> Result<()> {
    if len != arr.n_plus_1() {
        return Err(Error::Arity { expected: arr.n_plus_1(), got: len });
    }
    Ok(())
}

fn forms_off_walls(arr: &Arrangement, x: &[Rat]) -> Result<Vec<Rat>> {
    let l = arr.eval_forms(x)?;
    if let Some(i) = l.iter().position(Zero::is_zero) {
        return Err(Error::OnHyperplane(i));
    }
    Ok(l)
}

/// `A^T diag(1/l(x)) u`, exactly.
pub fn gradient(arr: &Arrangement, u: &[Rat], x: &[Rat]) -> Result<Vec<Rat>> {
    check_arity(arr, u.len())?;
    let l = forms_off_walls(arr, x)?;
    Ok((0..arr.d())
        .map(|j| (0..arr.n_plus_1()).fold(Rat::zero(), |s, i| s + &u[i] * &arr.a()[i][j] / &l[i]))
        .collect())
}

/// `sum_{|I| = d} det(A_I)^2 prod_{i in I} u_i / l_i(x)^2`, exactly.
pub fn hessian_det(arr: &Arrangement, u: &[Rat], x: &[Rat]) -> Result<Rat> {
    check_arity(arr, u.len())?;
    let l = forms_off_walls(arr, x)?;
    Ok(subsets(arr.n_plus_1(), arr.d()).iter().fold(Rat::zero(), |s, idx| {
        let m = det(&select_rows(arr.a(), idx));
        if m.is_zero() {
            return s;
        }
        let w = idx.iter().fold(Rat::one(), |w, &i| w * &u[i] / (&l[i] * &l[i]));
        s + &m * &m * w
    }))
}

/// `det(A^T diag(u_i / l_i(x)^2) A)`, exactly.
pub fn hessian_det_direct(arr: &Arrangement, u: &[Rat], x: &[Rat]) -> Result<Rat> {
    check_arity(arr, u.len())?;
    let l = forms_off_walls(arr, x)?;
    let d = arr.d();
    let m: Vec<Vec<Rat>> = (0..d)
        .map(|p| {
            (0..d)
                .map(|q| {
                    (0..arr.n_plus_1()).fold(Rat::zero(), |s, i| {
                        s + &arr.a()[i][p] * &arr.a()[i][q] * &u[i] / (&l[i] * &l[i])
                    })
                })
                .collect()
        })
        .collect();
    Ok(det(&m))
}

/// Gradient at a complex point with complex exponents.
pub fn gradient_c(arr: &Arrangement, u: &[Complex64], x: &[Complex64]) -> Result<Vec<Complex64>> {
    check_arity(arr, u.len())?;
    NumArrangement::new(arr).gradient(u, x)
}

/// Hessian determinant (minor-sum form) at a complex point.
pub fn hessian_det_c(arr: &Arrangement, u: &[Complex64], x: &[Complex64]) -> Result<Complex64> {
    check_arity(arr, u.len())?;
    NumArrangement::new(arr).hessian_det(u, x).map(|(h, _)| h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use crate::rng::substream;
    use rand::Rng as _;

    #[test]
    fn simplex_critical_point_is_exact() {
        // x_i = u_i / u_last-type solution: for u = (1,...,1,-(d+1)) the point x = (1,...,1)
        // solves 1/x_j - (d+1)/(sum x + 1) = 0
        for d in 1..=4 {
            let arr = Arrangement::simplex(d);
            let mut u = vec![rat(1); d];
            u.push(rat(-(d as i64 + 1)));
            let g = gradient(&arr, &u, &vec![rat(1); d]).unwrap();
            assert!(g.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn wall_and_zero_exponents() {
        let arr = crate::moduli::m0m_arrangement(5).unwrap().0;
        let u = vec![rat(1); 5];
        assert_eq!(gradient(&arr, &u, &[ratio(1, 2), ratio(1, 2)]), Err(Error::OnHyperplane(4)));
        let zero = vec![rat(0); 5];
        assert!(gradient(&arr, &zero, &[ratio(1, 3), ratio(5, 2)]).unwrap().iter().all(Zero::is_zero));
        assert_eq!(hessian_det(&arr, &zero, &[ratio(1, 3), ratio(5, 2)]).unwrap(), rat(0));
    }

    #[test]
    fn minor_sum_equals_direct_determinant() {
        let mut rng = substream(3, "hess");
        for trial in 0..100 {
            let d = 1 + trial % 3;
            let arr = Arrangement::random_doubly_uniform(d, d + 2 + trial % 3, &mut rng);
            let u: Vec<Rat> = (0..arr.n_plus_1()).map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect();
            let x: Vec<Rat> = (0..d).map(|_| ratio(rng.gen_range(-20..=20), rng.gen_range(1..=7))).collect();
            match (hessian_det(&arr, &u, &x), hessian_det_direct(&arr, &u, &x)) {
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                (Err(a), Err(b)) => assert_eq!(a, b),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn line_hessian_is_second_equation() {
        let arr = Arrangement::from_points(&[rat(0), rat(1), rat(3)]).unwrap();
        let u = vec![rat(2), rat(-1), rat(5)];
        let x = ratio(7, 2);
        let want = [rat(0), rat(1), rat(3)]
            .iter()
            .zip(&u)
            .fold(rat(0), |s, (p, ui)| s + ui / ((&x - p) * (&x - p)));
        assert_eq!(hessian_det(&arr, &u, &[x]).unwrap(), want);
    }

    #[test]
    fn exact_matches_numeric() {
        let mut rng = substream(5, "num");
        for _ in 0..20 {
            let arr = Arrangement::random_doubly_uniform(2, 5, &mut rng);
            let u: Vec<Rat> = (0..5).map(|_| ratio(rng.gen_range(1..=9), rng.gen_range(1..=5))).collect();
            let x: Vec<Rat> = (0..2).map(|_| ratio(rng.gen_range(-20..=20), rng.gen_range(1..=7))).collect();
            let Ok(h) = hessian_det(&arr, &u, &x) else { continue };
            let uc: Vec<Complex64> = u.iter().map(|r| Complex64::new(crate::rational::rat_to_f64(r), 0.0)).collect();
            let xc: Vec<Complex64> = x.iter().map(|r| Complex64::new(crate::rational::rat_to_f64(r), 0.0)).collect();
            let hn = hessian_det_c(&arr, &uc, &xc).unwrap();
            let he = crate::rational::rat_to_f64(&h);
            assert!((hn.re - he).abs() <= 1e-12 * he.abs().max(1e-300));
            let g = gradient(&arr, &u, &x).unwrap();
            let gn = gradient_c(&arr, &uc, &xc).unwrap();
            for (a, b) in g.iter().zip(&gn) {
                let a = crate::rational::rat_to_f64(a);
                assert!((a - b.re).abs() <= 1e-12 * (1.0 + a.abs()));
            }
        }
    }

    #[test]
    fn cleared_equations_have_degree_n() {
        let arr = crate::moduli::m0m_arrangement(5).unwrap().0;
        let sys = LikelihoodSystem::new(&arr, &[rat(2), rat(3), rat(5), rat(7), rat(-1)]).unwrap();
        for g in &sys.cleared_equations {
            assert!(g.total_degree().unwrap() <= 4);
        }
    }
}
