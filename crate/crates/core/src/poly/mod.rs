//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a map keyed by exponent vectors ordered by graded
//! reverse-lexicographic order; iteration in descending order is the
//! canonical term order used by every textual and JSON rendering.

mod doc;
pub mod modular;
mod resultant;

pub use doc::{PolyDoc, TermDoc};
pub use resultant::{
    quadric_discriminant, sylvester_matrix, sylvester_resultant, sylvester_resultant_direct,
    sylvester_resultant_modular, trial_divide, univariate_discriminant,
    univariate_discriminant_direct, univariate_discriminant_modular, ResultantPath,
};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::ExactRing;
use crate::rational::{rat_to_f64, Rat};

/// Exponent vector compared in graded reverse-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                // smaller exponent in the last differing variable is larger
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(vars: &[String]) -> Self {
        Poly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: Rat) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; vars.len()]), c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Poly::constant(vars, Rat::one())
    }

    /// The variable `name`, which must be among `vars`.
    pub fn var(vars: &[String], name: &str) -> Self {
        let i = vars.iter().position(|v| v == name).expect("variable in list");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Poly::monomial(vars, e, Rat::one())
    }

    pub fn monomial(vars: &[String], exps: Vec<u32>, c: Rat) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Poly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent arity");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Linear form `sum c_i * vars[i]` plus a constant.
    pub fn linear(vars: &[String], coeffs: &[Rat], constant: &Rat) -> Self {
        let mut p = Poly::constant(vars, constant.clone());
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Terms in canonical (descending grevlex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    /// Re-express over a variable list containing every occurring variable.
    pub fn with_vars(&self, vars: &[String]) -> Self {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let map: Vec<Option<usize>> =
            self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut out = Poly::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    let j = map[i].unwrap_or_else(|| panic!("variable {} dropped", self.vars[i]));
                    e[j] = x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Union of variable lists, keeping `self`'s order first.
    pub fn merged_vars(&self, other: &Poly) -> Vec<String> {
        let mut v = self.vars.clone();
        for w in &other.vars {
            if !v.contains(w) {
                v.push(w.clone());
            }
        }
        v
    }

    fn aligned(&self, other: &Poly) -> (Poly, Poly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let v = self.merged_vars(other);
        (self.with_vars(&v), other.with_vars(&v))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut a, b) = self.aligned(other);
        for (m, c) in b.terms {
            a.add_term(m, c);
        }
        a
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let (mut a, b) = self.aligned(other);
        for (m, c) in b.terms {
            a.add_term(m, -c);
        }
        a
    }

    pub fn neg(&self) -> Poly {
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let (a, b) = self.aligned(other);
        if a.is_zero() || b.is_zero() {
            return Poly::zero(&a.vars);
        }
        let mut acc: HashMap<Vec<u32>, Rat> = HashMap::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                let v = ca * cb;
                match acc.get_mut(&e) {
                    Some(s) => *s += v,
                    None => {
                        acc.insert(e, v);
                    }
                }
            }
        }
        Poly {
            vars: a.vars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (Monomial(e), c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn derivative(&self, var: &str) -> Poly {
        let Some(i) = self.var_index(var) else { return Poly::zero(&self.vars) };
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[i] > 0 {
                let mut e = m.0.clone();
                e[i] -= 1;
                out.add_term(Monomial(e), c * Rat::from_integer(BigInt::from(m.0[i])));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.nvars() {
            return Err(Error::Arity { expected: self.nvars(), got: point.len() });
        }
        let mut powers: Vec<Vec<Rat>> = Vec::with_capacity(point.len());
        for (i, x) in point.iter().enumerate() {
            let d = self.degree_in(i) as usize;
            let mut p = vec![Rat::one()];
            for k in 0..d {
                let next = &p[k] * x;
                p.push(next);
            }
            powers.push(p);
        }
        let mut s = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            s += t;
        }
        Ok(s)
    }

    pub fn eval_c64(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars() {
            return Err(Error::Arity { expected: self.nvars(), got: point.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut t = Complex64::new(rat_to_f64(c), 0.0);
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t *= point[i].powu(e);
                    }
                }
                t
            })
            .sum())
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        let z: Vec<Complex64> = point.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.eval_c64(&z).map(|c| c.re)
    }

    /// Fixes one variable to a rational value (the variable stays in the list).
    pub fn specialize(&self, var: &str, value: &Rat) -> Poly {
        let Some(i) = self.var_index(var) else { return self.clone() };
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[i];
            e[i] = 0;
            out.add_term(Monomial(e), c * num_traits::pow(value.clone(), k as usize));
        }
        out
    }

    /// Replaces `var` by the polynomial `g`.
    pub fn substitute(&self, var: &str, g: &Poly) -> Poly {
        let vars = self.merged_vars(g);
        let f = self.with_vars(&vars);
        let g = g.with_vars(&vars);
        let Some(i) = f.var_index(var) else { return f };
        let coeffs = f.coeffs_in(i);
        // Horner in g
        let mut acc = Poly::zero(&vars);
        for c in coeffs.iter().rev() {
            acc = acc.mul(&g).add(c);
        }
        acc
    }

    /// Coefficients with respect to variable `idx`, lowest power first. Each
    /// coefficient keeps the full variable list (with exponent zero at `idx`).
    pub fn coeffs_in(&self, idx: usize) -> Vec<Poly> {
        let d = self.degree_in(idx) as usize;
        let mut out = vec![Poly::zero(&self.vars); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[idx] as usize;
            let mut e = m.0.clone();
            e[idx] = 0;
            out[k].add_term(Monomial(e), c.clone());
        }
        out
    }

    /// `x0^deg(f) * f(x / x0)` with the new variable appended.
    pub fn homogenize(&self, new_var: &str) -> Poly {
        let mut vars = self.vars.clone();
        assert!(!vars.iter().any(|v| v == new_var), "homogenizing variable already present");
        vars.push(new_var.to_string());
        let d = self.total_degree().unwrap_or(0);
        let mut out = Poly::zero(&vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.push(d - m.degree());
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self`.
    pub fn div_exact(&self, g: &Poly) -> Option<Poly> {
        if g.is_zero() {
            return None;
        }
        let (mut r, g) = self.aligned(g);
        let (gm, gc) = g.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let rest: Vec<(Monomial, Rat)> = g.terms.iter().filter(|(m, _)| **m != gm).map(|(m, c)| (m.clone(), c.clone())).collect();
        let mut q = Poly::zero(&r.vars);
        while let Some((rm, rc)) = r.terms.pop_last() {
            if !gm.divides(&rm) {
                return None;
            }
            let e: Vec<u32> = rm.0.iter().zip(&gm.0).map(|(a, b)| a - b).collect();
            let c = rc / &gc;
            for (m, gcoef) in &rest {
                let prod: Vec<u32> = m.0.iter().zip(&e).map(|(a, b)| a + b).collect();
                r.add_term(Monomial(prod), -(&c * gcoef));
            }
            q.terms.insert(Monomial(e), c);
        }
        Some(q)
    }

    /// Coprime integer coefficients with positive leading coefficient.
    pub fn canonicalize(&self) -> Result<Poly> {
        let (_, lc) = self.leading_term().ok_or(Error::ZeroPolynomial)?;
        let l = crate::rational::denom_lcm(self.terms.values());
        let ints: Vec<BigInt> =
            self.terms.values().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let mut s = Rat::new(l, g);
        if lc.is_negative() {
            s = -s;
        }
        Ok(self.scale(&s))
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize().map(|c| &c == self).unwrap_or(false)
    }

    /// Drops variable `idx`, which must not occur.
    pub fn remove_var(&self, idx: usize) -> Poly {
        let mut vars = self.vars.clone();
        vars.remove(idx);
        let mut out = Poly::zero(&vars);
        for (m, c) in &self.terms {
            assert_eq!(m.0[idx], 0, "removed variable occurs");
            let mut e = m.0.clone();
            e.remove(idx);
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Exact coefficients as a plain list in canonical order.
    pub fn term_list(&self) -> Vec<(Vec<u32>, Rat)> {
        self.terms().map(|(m, c)| (m.0.clone(), c.clone())).collect()
    }

    /// Renames variables positionally.
    pub fn rename(&self, vars: &[String]) -> Poly {
        assert_eq!(vars.len(), self.nvars());
        Poly { vars: vars.to_vec(), terms: self.terms.clone() }
    }

    /// Applies a permutation: variable `i` of `self` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; m.0.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[perm[i]] = x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Human-readable rendering, e.g. `u0^2*u1 - 3/2*u2 + 1`.
    pub fn to_text(&self) -> String {
        self.render(" + ", " - ")
    }

    /// Rendering without spaces, e.g. `t^2-5*t+6`.
    pub fn to_compact(&self) -> String {
        self.render("+", "-")
    }

    fn render(&self, plus: &str, minus: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { minus } else { plus });
            }
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect();
            let cs = crate::rational::format_rat(&a);
            if mono.is_empty() {
                s.push_str(&cs);
            } else {
                if !a.is_one() {
                    s.push_str(&cs);
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl ExactRing for Poly {
    fn r_is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn r_zero(&self) -> Self {
        Poly::zero(&self.vars)
    }
    fn r_one(&self) -> Self {
        Poly::one(&self.vars)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn r_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn r_neg(&self) -> Self {
        self.neg()
    }
    fn r_div(&self, o: &Self) -> Self {
        self.div_exact(o).expect("inexact division in fraction-free elimination")
    }
}

/// Variable names `prefix0, prefix1, ...`.
pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Parses a small polynomial expression such as `3*u0^2 - u1*u2 + 1/2`.
/// Only `+`, `-`, `*`, `^`, integer/rational coefficients and the given
/// variables are accepted; no parentheses.
pub fn parse_expr(vars: &[String], s: &str) -> Result<Poly> {
    let mut out = Poly::zero(vars);
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '-' && i == 0 {
            neg = true;
        } else if ch == '+' && i == 0 {
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    for (pos, (neg, t)) in terms.into_iter().enumerate() {
        if t.is_empty() {
            return Err(Error::parse(format!("term {pos}"), "empty term"));
        }
        let mut c = Rat::one();
        let mut e = vec![0u32; vars.len()];
        for factor in t.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, x)) => (
                    b,
                    x.parse::<u32>().map_err(|_| Error::parse(format!("term {pos}"), format!("bad exponent in '{factor}'")))?,
                ),
                None => (factor, 1),
            };
            if let Some(i) = vars.iter().position(|v| v == base) {
                e[i] += exp;
            } else {
                let r = crate::rational::parse_rat_at(base, format!("term {pos}"))?;
                c *= num_traits::pow(r, exp as usize);
            }
        }
        out.add_term(Monomial(e), if neg { -c } else { c });
    }
    Ok(out)
}
