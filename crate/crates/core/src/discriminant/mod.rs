//! Logarithmic discriminants: closed forms on the line, modular
//! implicitization in higher dimension, and numerical certification.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng as _;
use serde::{Serialize, Serializer};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyDoc};
use crate::rational::{binomial, format_rat, rat_from_f64, rat_to_f64, Rat};
use crate::rng::substream;

mod certify;
mod elim;
mod line;
mod split;

pub use certify::{certify_factor, zero_locus_sample};
pub use elim::{logdisc_elim, ElimOptions};
pub use line::{d1_disc_route, d1_res_route, logdisc_d1, point_forms};
pub use split::split_factors;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DiscD1,
    ResD1,
    Elimination,
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub poly: Poly,
    pub multiplicity: u32,
    pub certified: bool,
    /// Zero-locus samples tried and how many were judged near the discriminant.
    pub samples: usize,
    pub near: usize,
}

#[derive(Clone, Debug)]
pub struct Leftover {
    pub polys: Vec<Poly>,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct DiscriminantResult {
    pub factors: Vec<Factor>,
    pub leftover: Vec<Leftover>,
    pub total_degree: u32,
    pub method: Method,
    pub notes: Vec<String>,
}

impl DiscriminantResult {
    pub(crate) fn new(vars: &[String], factors: Vec<Factor>, leftover: Vec<Leftover>, method: Method, notes: Vec<String>) -> Self {
        let mut factors = factors;
        for f in &mut factors {
            f.poly = f.poly.with_vars(vars);
        }
        factors.sort_by(|a, b| (a.poly.total_degree(), a.poly.to_text()).cmp(&(b.poly.total_degree(), b.poly.to_text())));
        let total_degree = factors.iter().map(|f| f.poly.total_degree().unwrap_or(0) * f.multiplicity).sum();
        DiscriminantResult { factors, leftover, total_degree, method, notes }
    }

    pub fn certified_factors(&self) -> Vec<&Poly> {
        self.factors.iter().filter(|f| f.certified).map(|f| &f.poly).collect()
    }

    /// Product of all factors with multiplicity (the constant 1 when empty).
    pub fn product(&self, vars: &[String]) -> Poly {
        self.factors.iter().fold(Poly::one(vars), |acc, f| acc.mul(&f.poly.pow(f.multiplicity)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "factors": self.factors.iter().map(|f| serde_json::json!({
                "poly": PolyDoc::from(&f.poly),
                "text": f.poly.to_text(),
                "degree": f.poly.total_degree(),
                "multiplicity": f.multiplicity,
                "certified": f.certified,
                "certification": {"samples": f.samples, "near": f.near},
            })).collect::<Vec<_>>(),
            "leftover": self.leftover.iter().map(|l| serde_json::json!({
                "polys": l.polys.iter().map(PolyDoc::from).collect::<Vec<_>>(),
                "text": l.polys.iter().map(Poly::to_text).collect::<Vec<_>>(),
                "note": l.note,
            })).collect::<Vec<_>>(),
            "total_degree": self.total_degree,
            "method": self.method,
            "notes": self.notes,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscMethod {
    Auto,
    D1,
    Elim,
}

/// Dispatches to the closed form on the line and to elimination otherwise.
pub fn discriminant(arr: &Arrangement, method: DiscMethod, opts: &ElimOptions) -> Result<DiscriminantResult> {
    match method {
        DiscMethod::D1 | DiscMethod::Auto if arr.d() == 1 => {
            let mut r = logdisc_d1(&line_points(arr)?)?;
            let vars = arr.u_vars();
            for f in &mut r.factors {
                f.poly = f.poly.rename(&vars);
            }
            Ok(r)
        }
        DiscMethod::D1 => Err(Error::Invalid(format!("method d1 needs d = 1, got d = {}", arr.d()))),
        _ => logdisc_elim(arr, opts),
    }
}

/// Roots `-b_i / a_i` of the forms of a line arrangement.
pub fn line_points(arr: &Arrangement) -> Result<Vec<Rat>> {
    if arr.d() != 1 {
        return Err(Error::Invalid("not a line arrangement".into()));
    }
    Ok(arr.b().iter().zip(arr.a()).map(|(b, a)| -(b / &a[0])).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedDegree {
    Value(u64),
    NotApplicable,
}

impl fmt::Display for ExpectedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectedDegree::Value(v) => write!(f, "{v}"),
            ExpectedDegree::NotApplicable => f.write_str("not applicable (special arrangement)"),
        }
    }
}

impl Serialize for ExpectedDegree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExpectedDegree::Value(v) => s.serialize_u64(*v),
            ExpectedDegree::NotApplicable => s.serialize_str(&self.to_string()),
        }
    }
}

/// Degree of the discriminant when a closed formula applies.
pub fn expected_degree(arr: &Arrangement) -> ExpectedDegree {
    let d = arr.d();
    let n = arr.n_plus_1() - 1;
    if d == 1 {
        ExpectedDegree::Value(2 * (n as u64).saturating_sub(1))
    } else if arr.is_doubly_uniform() {
        ExpectedDegree::Value(2 * d as u64 * binomial(n - 1, d) as u64)
    } else {
        ExpectedDegree::NotApplicable
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessValue {
    pub point: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub samples: usize,
    pub positive: usize,
    pub nonpositive: usize,
    pub min_value: Option<f64>,
    pub first_nonpositive: Option<Vec<f64>>,
    pub witnesses: Vec<WitnessValue>,
    pub pass: bool,
}

/// Samples the open positive orthant with log-uniform coordinates in
/// `[1e-3, 1e3]` and evaluates `f` exactly at each sample.
pub fn positivity_scan(f: &Poly, n_samples: usize, seed: u64, witnesses: &[Vec<Rat>]) -> Result<PositivityReport> {
    if !f.is_homogeneous() {
        return Err(Error::Invalid("positivity scan needs a homogeneous polynomial".into()));
    }
    let mut rng = substream(seed, "positivity");
    let n = f.nvars();
    let ln = 1e3f64.ln();
    let mut positive = 0;
    let mut min_value: Option<f64> = None;
    let mut first_nonpositive = None;
    for _ in 0..n_samples {
        let pt: Vec<f64> = (0..n).map(|_| rng.gen_range(-ln..ln).exp()).collect();
        let exact: Vec<Rat> = pt.iter().map(|&x| rat_from_f64(x)).collect();
        let v = f.eval(&exact)?;
        let norm = rat_to_f64(&v) / pt.iter().fold(1.0f64, |m, &x| m.max(x)).powi(f.total_degree().unwrap_or(0) as i32);
        min_value = Some(min_value.map_or(norm, |m| m.min(norm)));
        if v.is_positive() {
            positive += 1;
        } else if first_nonpositive.is_none() {
            first_nonpositive = Some(pt);
        }
    }
    let witnesses = witnesses
        .iter()
        .map(|w| Ok(WitnessValue { point: w.iter().map(format_rat).collect(), value: format_rat(&f.eval(w)?) }))
        .collect::<Result<Vec<_>>>()?;
    Ok(PositivityReport {
        samples: n_samples,
        positive,
        nonpositive: n_samples - positive,
        min_value,
        first_nonpositive,
        witnesses,
        pass: positive == n_samples,
    })
}

/// `sum_{i in S} u_i` for a bit mask `S`.
pub(crate) fn subset_sum(vars: &[String], mask: u64) -> Poly {
    let coeffs: Vec<Rat> = (0..vars.len()).map(|i| if mask >> i & 1 == 1 { Rat::one() } else { Rat::zero() }).collect();
    Poly::linear(vars, &coeffs, &Rat::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{m05_discriminant, m0m_arrangement};
    use crate::poly::var_names;
    use crate::rational::{rat, ratio};
    use crate::rng::substream;

    #[test]
    fn expected_degrees() {
        let three = Arrangement::from_points(&[rat(0), rat(1), rat(5)]).unwrap();
        assert_eq!(expected_degree(&three), ExpectedDegree::Value(2));
        let mut rng = substream(3, "expected");
        let generic = Arrangement::random_doubly_uniform(2, 5, &mut rng);
        assert_eq!(expected_degree(&generic), ExpectedDegree::Value(12));
        let (m05, _) = m0m_arrangement(5).unwrap();
        assert_eq!(expected_degree(&m05), ExpectedDegree::NotApplicable);
        assert_eq!(expected_degree(&Arrangement::simplex(3)), ExpectedDegree::Value(0));
    }

    #[test]
    fn m05_positive() {
        let f = m05_discriminant(&var_names("u", 5));
        let w = vec![ratio(-1, 2), rat(1), rat(2), ratio(-1, 2), rat(-1)];
        let r = positivity_scan(&f, 2000, 0, &[w]).unwrap();
        assert!(r.pass);
        assert_eq!(r.witnesses[0].value, "-7/16");
    }

    #[test]
    fn product_of_variables_positive() {
        let v = var_names("u", 2);
        let f = Poly::var(&v, "u0").mul(&Poly::var(&v, "u1"));
        assert!(positivity_scan(&f, 500, 1, &[]).unwrap().pass);
        let g = Poly::var(&v, "u0").sub(&Poly::var(&v, "u1"));
        let r = positivity_scan(&g, 500, 1, &[]).unwrap();
        assert!(!r.pass);
        assert!(r.first_nonpositive.is_some());
    }
}
