//! Affine hyperplane arrangements `l_i(x) = b_i + A_i x` over the rationals,
//! their validation and matroid invariants.

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank, select_rows};
use crate::poly::{var_names, Poly};
use crate::rational::{format_rat, parse_rat_at, rat, rat_to_f64, subsets, Rat};
use crate::rng::Rng;

/// Largest hyperplane count accepted by subset enumeration.
pub const SUBSET_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    d: usize,
    b: Vec<Rat>,
    a: Vec<Vec<Rat>>,
    labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementDoc {
    pub d: usize,
    pub b: Vec<String>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub essential: bool,
    pub uniform_l: bool,
    pub uniform_a: bool,
    pub doubly_uniform: bool,
    pub flats_at_infinity: bool,
    pub witness: Option<Vec<usize>>,
}

impl Arrangement {
    /// Validated arrangement from constant terms `b` and linear parts `a`.
    pub fn new(b: Vec<Rat>, a: Vec<Vec<Rat>>, labels: Option<Vec<String>>) -> Result<Self> {
        if b.len() != a.len() {
            return Err(Error::Invalid(format!("{} constant terms for {} forms", b.len(), a.len())));
        }
        let d = a.first().map_or(0, Vec::len);
        if d == 0 {
            return Err(Error::Invalid("ambient dimension must be positive".into()));
        }
        if let Some(i) = a.iter().position(|r| r.len() != d) {
            return Err(Error::Invalid(format!("row {i} of A has length {}, expected {d}", a[i].len())));
        }
        if let Some(l) = &labels {
            if l.len() != b.len() {
                return Err(Error::Invalid(format!("{} labels for {} forms", l.len(), b.len())));
            }
        }
        let arr = Arrangement { d, b, a, labels };
        if let Some(i) = arr.a.iter().position(|r| r.iter().all(Zero::is_zero)) {
            return Err(Error::DegenerateForm(i));
        }
        let r = rank(&arr.l_rows());
        if r != d + 1 {
            return Err(Error::NotEssential { rank: r, needed: d + 1 });
        }
        let rows = arr.l_rows();
        for j in 0..rows.len() {
            for i in 0..j {
                if rank(&[rows[i].clone(), rows[j].clone()]) < 2 {
                    return Err(Error::RepeatedHyperplane(i, j));
                }
            }
        }
        Ok(arr)
    }

    pub fn from_doc(doc: &ArrangementDoc) -> Result<Self> {
        let b = doc
            .b
            .iter()
            .enumerate()
            .map(|(i, s)| parse_rat_at(s, format!("b[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let mut a = Vec::with_capacity(doc.a.len());
        for (i, row) in doc.a.iter().enumerate() {
            if row.len() != doc.d {
                return Err(Error::parse(format!("A[{i}]"), format!("expected {} entries, got {}", doc.d, row.len())));
            }
            a.push(
                row.iter()
                    .enumerate()
                    .map(|(j, s)| parse_rat_at(s, format!("A[{i}][{j}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        if b.len() != a.len() {
            return Err(Error::parse("b", format!("{} entries but A has {} rows", b.len(), a.len())));
        }
        Self::new(b, a, doc.labels.clone())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: ArrangementDoc = serde_json::from_str(s)
            .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn to_doc(&self) -> ArrangementDoc {
        ArrangementDoc {
            d: self.d,
            b: self.b.iter().map(format_rat).collect(),
            a: self.a.iter().map(|r| r.iter().map(format_rat).collect()).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Points `p_i` on the line, with forms `x - p_i`.
    pub fn from_points(points: &[Rat]) -> Result<Self> {
        Self::new(points.iter().map(|p| -p).collect(), points.iter().map(|_| vec![Rat::one()]).collect(), None)
    }

    /// Coordinate hyperplanes together with `x_1 + ... + x_d + 1`.
    pub fn simplex(d: usize) -> Self {
        let mut b = vec![Rat::zero(); d];
        b.push(Rat::one());
        let mut a: Vec<Vec<Rat>> =
            (0..d).map(|i| (0..d).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
        a.push(vec![Rat::one(); d]);
        Self::new(b, a, None).expect("simplex arrangement is valid")
    }

    /// Random small-integer arrangement, redrawn until valid and doubly uniform.
    pub fn random_doubly_uniform(d: usize, n_plus_1: usize, rng: &mut Rng) -> Self {
        assert!(n_plus_1 > d);
        loop {
            let mut draw = || Rat::from_integer(rng.gen_range(-9i64..=9).into());
            let b: Vec<Rat> = (0..n_plus_1).map(|_| draw()).collect();
            let a: Vec<Vec<Rat>> = (0..n_plus_1).map(|_| (0..d).map(|_| draw()).collect()).collect();
            if let Ok(arr) = Self::new(b, a, None) {
                if arr.is_doubly_uniform() {
                    return arr;
                }
            }
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_plus_1(&self) -> usize {
        self.b.len()
    }

    pub fn b(&self) -> &[Rat] {
        &self.b
    }

    pub fn a(&self) -> &[Vec<Rat>] {
        &self.a
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_plus_1() {
            return Err(Error::Invalid(format!("{} labels for {} forms", labels.len(), self.n_plus_1())));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Names of the exponent variables: the labels when present, else `u0, u1, ...`.
    pub fn u_vars(&self) -> Vec<String> {
        match &self.labels {
            Some(l) => l.clone(),
            None => var_names("u", self.n_plus_1()),
        }
    }

    /// Names `x1, ..., xd` of the coordinates.
    pub fn x_vars(&self) -> Vec<String> {
        (1..=self.d).map(|i| format!("x{i}")).collect()
    }

    /// Rows `[b_i, A_i]`.
    pub fn l_rows(&self) -> Vec<Vec<Rat>> {
        self.b
            .iter()
            .zip(&self.a)
            .map(|(b, a)| {
                let mut r = vec![b.clone()];
                r.extend(a.iter().cloned());
                r
            })
            .collect()
    }

    pub fn form(&self, i: usize) -> Poly {
        Poly::linear(&self.x_vars(), &self.a[i], &self.b[i])
    }

    pub fn forms(&self) -> Vec<Poly> {
        (0..self.n_plus_1()).map(|i| self.form(i)).collect()
    }

    pub fn eval_forms(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        if x.len() != self.d {
            return Err(Error::Arity { expected: self.d, got: x.len() });
        }
        Ok(self
            .b
            .iter()
            .zip(&self.a)
            .map(|(b, a)| a.iter().zip(x).fold(b.clone(), |s, (ai, xi)| s + ai * xi))
            .collect())
    }

    pub fn eval_forms_c(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.b
            .iter()
            .zip(&self.a)
            .map(|(b, a)| {
                a.iter().zip(x).fold(Complex64::new(rat_to_f64(b), 0.0), |s, (ai, xi)| s + xi * rat_to_f64(ai))
            })
            .collect()
    }

    /// Floating copies of `b` and `A`.
    pub fn to_f64(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        (
            self.b.iter().map(rat_to_f64).collect(),
            self.a.iter().map(|r| r.iter().map(rat_to_f64).collect()).collect(),
        )
    }

    /// The arrangement in new coordinates: `x = M y + c`.
    pub fn transform(&self, m: &[Vec<Rat>], c: &[Rat]) -> Result<Self> {
        let d = self.d;
        let b = (0..self.n_plus_1())
            .map(|i| (0..d).fold(self.b[i].clone(), |s, k| s + &self.a[i][k] * &c[k]))
            .collect();
        let a = (0..self.n_plus_1())
            .map(|i| (0..d).map(|j| (0..d).fold(Rat::zero(), |s, k| s + &self.a[i][k] * &m[k][j])).collect())
            .collect();
        Self::new(b, a, self.labels.clone())
    }

    /// Reorders forms: new form `k` is old form `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        Self::new(
            perm.iter().map(|&i| self.b[i].clone()).collect(),
            perm.iter().map(|&i| self.a[i].clone()).collect(),
            self.labels.as_ref().map(|l| perm.iter().map(|&i| l[i].clone()).collect()),
        )
    }

    /// Multiplies form `i` by a nonzero rational.
    pub fn scale_form(&self, i: usize, s: &Rat) -> Result<Self> {
        let mut out = self.clone();
        out.b[i] *= s;
        for x in out.a[i].iter_mut() {
            *x *= s;
        }
        Self::new(out.b, out.a, out.labels)
    }

    fn ranks(&self, s: &[usize]) -> (usize, usize) {
        (rank(&select_rows(&self.l_rows(), s)), rank(&select_rows(&self.a, s)))
    }

    pub fn is_doubly_uniform(&self) -> bool {
        let l = self.l_rows();
        subsets(self.n_plus_1(), self.d + 1).iter().all(|s| rank(&select_rows(&l, s)) == self.d + 1)
            && subsets(self.n_plus_1(), self.d).iter().all(|s| rank(&select_rows(&self.a, s)) == self.d)
    }

    pub fn validate(&self) -> ValidationReport {
        let n1 = self.n_plus_1();
        let l = self.l_rows();
        let uniform_l = subsets(n1, self.d + 1).par_iter().all(|s| rank(&select_rows(&l, s)) == self.d + 1);
        let uniform_a = subsets(n1, self.d).par_iter().all(|s| rank(&select_rows(&self.a, s)) == self.d);
        let witness = self.flat_at_infinity_witness();
        ValidationReport {
            essential: true,
            uniform_l,
            uniform_a,
            doubly_uniform: uniform_l && uniform_a,
            flats_at_infinity: witness.is_some(),
            witness,
        }
    }

    /// Lexicographically smallest inclusion-minimal `S` whose hyperplanes meet
    /// only at infinity.
    pub fn flat_at_infinity_witness(&self) -> Option<Vec<usize>> {
        let mut found: Vec<Vec<usize>> = Vec::new();
        for k in 1..=self.d {
            let hits: Vec<Vec<usize>> = subsets(self.n_plus_1(), k)
                .into_par_iter()
                .filter(|s| {
                    let (rl, ra) = self.ranks(s);
                    rl == ra + 1 && rl <= self.d
                })
                .collect();
            for s in hits {
                if !found.iter().any(|f| f.iter().all(|i| s.contains(i))) {
                    found.push(s);
                }
            }
        }
        found.into_iter().min()
    }

    /// Whitney-sum characteristic polynomial in `t`.
    pub fn characteristic_polynomial(&self) -> Result<Poly> {
        let n1 = self.n_plus_1();
        if n1 > SUBSET_CAP {
            return Err(Error::SizeCap(format!("{n1} hyperplanes exceed the subset cap of {SUBSET_CAP}")));
        }
        let d = self.d;
        let counts = (0u32..(1 << n1))
            .into_par_iter()
            .fold(
                || vec![0i64; d + 1],
                |mut acc, mask| {
                    let s: Vec<usize> = (0..n1).filter(|i| mask >> i & 1 == 1).collect();
                    let (rl, ra) = self.ranks(&s);
                    if rl == ra {
                        acc[d - ra] += if s.len() % 2 == 0 { 1 } else { -1 };
                    }
                    acc
                },
            )
            .reduce(|| vec![0i64; d + 1], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
        let t = vec!["t".to_string()];
        Ok(Poly::from_terms(&t, counts.into_iter().enumerate().map(|(k, c)| (vec![k as u32], rat(c)))))
    }

    fn chi_at(&self, t: i64) -> Result<i64> {
        let chi = self.characteristic_polynomial()?;
        let v = chi.eval(&[rat(t)])?;
        Ok(v.to_integer().try_into().expect("small integer"))
    }

    fn sign(&self) -> i64 {
        if self.d % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Number of complex critical points for generic exponents.
    pub fn ml_degree(&self) -> Result<u64> {
        Ok((self.sign() * self.chi_at(1)?) as u64)
    }

    /// Number of real regions.
    pub fn regions(&self) -> Result<u64> {
        Ok((self.sign() * self.chi_at(-1)?) as u64)
    }

    /// Number of bounded real regions.
    pub fn bounded_regions(&self) -> Result<u64> {
        self.ml_degree()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::rng::substream;
    use proptest::prelude::*;

    pub(crate) fn m05() -> Arrangement {
        let z = Rat::zero;
        let o = Rat::one;
        Arrangement::new(
            vec![z(), z(), -o(), -o(), z()],
            vec![vec![o(), z()], vec![z(), o()], vec![o(), z()], vec![z(), o()], vec![-o(), o()]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn m05_invariants() {
        let a = m05();
        assert_eq!(a.characteristic_polynomial().unwrap().to_compact(), "t^2-5*t+6");
        assert_eq!(a.regions().unwrap(), 12);
        assert_eq!(a.ml_degree().unwrap(), 2);
        let v = a.validate();
        assert!(!v.uniform_a);
        assert!(v.flats_at_infinity);
        assert_eq!(v.witness, Some(vec![0, 2]));
    }

    #[test]
    fn three_points_and_simplex() {
        let p = Arrangement::from_points(&[rat(0), rat(1), rat(2)]).unwrap();
        assert_eq!(p.characteristic_polynomial().unwrap().to_compact(), "t-3");
        for d in 1..=4 {
            let s = Arrangement::simplex(d);
            // d+1 generic hyperplanes: sum_k (-1)^k C(d+1, k) t^(d-k)
            let t = vec!["t".to_string()];
            let want = Poly::from_terms(
                &t,
                (0..=d).map(|k| {
                    let c = crate::rational::binomial(d + 1, k) as i64;
                    (vec![(d - k) as u32], rat(if k % 2 == 0 { c } else { -c }))
                }),
            );
            assert_eq!(s.characteristic_polynomial().unwrap(), want);
            assert_eq!(s.ml_degree().unwrap(), 1);
        }
    }

    #[test]
    fn load_errors() {
        let zero_row = r#"{"d":2,"b":["0","1","2"],"A":[["1","0"],["0","0"],["0","1"]]}"#;
        let e = Arrangement::from_json_str(zero_row).unwrap_err();
        assert!(e.to_string().contains("not essential/non-central"));
        let central = r#"{"d":2,"b":["0","0","0"],"A":[["1","0"],["0","1"],["1","1"]]}"#;
        assert!(Arrangement::from_json_str(central).unwrap_err().to_string().contains("not essential/non-central"));
        let rep = r#"{"d":1,"b":["1","2","3"],"A":[["1"],["2"],["1"]]}"#;
        assert_eq!(Arrangement::from_json_str(rep).unwrap_err().to_string(), "repeated hyperplane 0,1");
        let bad = r#"{"d":1,"b":["1","2.5"],"A":[["1"],["1"]]}"#;
        match Arrangement::from_json_str(bad).unwrap_err() {
            Error::Parse { location, .. } => assert_eq!(location, "b[1]"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn three_point_document() {
        let doc = r#"{"d":1,"b":["0","-1","-5/3"],"A":[["1"],["1"],["1"]]}"#;
        let a = Arrangement::from_json_str(doc).unwrap();
        assert_eq!(a.n_plus_1(), 3);
        assert_eq!(a.eval_forms(&[ratio(5, 3)]).unwrap()[2], rat(0));
        let back = serde_json::to_string(&a.to_doc()).unwrap();
        assert_eq!(Arrangement::from_json_str(&back).unwrap(), a);
    }

    #[test]
    fn random_generic_has_no_flats_at_infinity() {
        let mut rng = substream(7, "arr");
        for _ in 0..5 {
            let a = Arrangement::random_doubly_uniform(2, 5, &mut rng);
            let v = a.validate();
            assert!(v.doubly_uniform && !v.flats_at_infinity);
            assert_eq!(a.ml_degree().unwrap(), 6);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn chi_invariant_under_permutation_and_scaling(seed in 0u64..1000, k in 0usize..5, num in 1i64..7) {
            let mut rng = substream(seed, "prop");
            let a = Arrangement::random_doubly_uniform(2, 5, &mut rng);
            let chi = a.characteristic_polynomial().unwrap();
            let p = a.permute(&[4, 2, 0, 3, 1]).unwrap();
            prop_assert_eq!(p.characteristic_polynomial().unwrap(), chi.clone());
            let s = a.scale_form(k, &ratio(-num, 3)).unwrap();
            prop_assert_eq!(s.characteristic_polynomial().unwrap(), chi);
            prop_assert!(a.regions().unwrap() >= a.bounded_regions().unwrap());
            prop_assert!(a.bounded_regions().unwrap() >= 1);
        }
    }
}
