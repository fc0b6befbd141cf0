//! Word-size prime fields and the multi-prime reconstruction machinery.
//!
//! Field elements are `u64` values in Montgomery form; `enc`/`dec` convert
//! from and to the ordinary residue in `[0, p)`. Addition, subtraction and
//! comparison with zero are representation-independent.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::Poly;
use crate::error::{Error, Result};
use crate::rational::Rat;

pub type Fe = u64;

#[derive(Clone, Copy, Debug)]
pub struct Field {
    p: u64,
    ninv: u64,
    r2: u64,
    one: u64,
}

impl Field {
    /// `p` must be an odd prime below 2^62.
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < (1 << 62));
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Field { p, ninv: inv.wrapping_neg(), r2, one: r }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.ninv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn enc(&self, a: u64) -> Fe {
        self.redc((a % self.p) as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn dec(&self, a: Fe) -> u64 {
        self.redc(a as u128)
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        0
    }

    #[inline]
    pub fn one(&self) -> Fe {
        self.one
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.redc(a as u128 * b as u128)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = self.one;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: Fe) -> Fe {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, x: i64) -> Fe {
        let r = x.rem_euclid(self.p as i64) as u64;
        self.enc(r)
    }

    pub fn from_bigint(&self, x: &BigInt) -> Fe {
        let r = x.mod_floor(&BigInt::from(self.p));
        self.enc(r.to_u64().expect("reduced residue"))
    }

    /// `None` when the denominator vanishes modulo `p`.
    pub fn from_rat(&self, x: &Rat) -> Option<Fe> {
        let d = self.from_bigint(x.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.from_bigint(x.numer()), self.inv(d)))
    }

    pub fn random(&self, rng: &mut impl rand::Rng) -> Fe {
        self.enc(rng.gen_range(0..self.p))
    }

    pub fn random_nonzero(&self, rng: &mut impl rand::Rng) -> Fe {
        self.enc(rng.gen_range(1..self.p))
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^62 in descending order.
#[derive(Clone, Debug)]
pub struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    pub fn new() -> Self {
        PrimeStream { next: (1u64 << 62) - 1 }
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while !is_prime(self.next) {
            self.next -= 2;
        }
        let p = self.next;
        self.next -= 2;
        Some(p)
    }
}

/// Rational `a/b` with `a = b*r mod m`, `|a|, |b| <= sqrt(m/2)`.
pub fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, rem) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, rem);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rat::new(r1, t1))
}

const MAX_PRIMES: usize = 4000;

/// Reconstructs a rational vector from its images modulo many primes.
///
/// `eval` returns the residues in `[0, p)` for one prime, or `None` when the
/// prime is unlucky. Whenever rational reconstruction succeeds, the candidate
/// is checked against the next prime's image and accepted if they agree.
pub fn reconstruct_rationals<F>(len: usize, eval: F) -> Result<Vec<Rat>>
where
    F: Fn(&Field) -> Option<Vec<u64>> + Sync,
{
    let threads = rayon::current_num_threads().max(1);
    let mut primes = PrimeStream::new();
    let mut modulus = BigInt::one();
    let mut acc = vec![BigInt::zero(); len];
    let mut candidate: Option<Vec<Rat>> = None;
    let mut tried = 0usize;
    loop {
        let batch: Vec<u64> = primes.by_ref().take(threads).collect();
        tried += batch.len();
        let results: Vec<Option<Vec<u64>>> = batch.par_iter().map(|&p| eval(&Field::new(p))).collect();
        for (&p, r) in batch.iter().zip(results) {
            let Some(r) = r else { continue };
            assert_eq!(r.len(), len, "residue vector length");
            if let Some(c) = &candidate {
                let f = Field::new(p);
                if c.iter().zip(&r).all(|(c, &v)| f.from_rat(c).map(|x| f.dec(x)) == Some(v)) {
                    return Ok(candidate.take().unwrap());
                }
            }
            crt_accumulate(&mut acc, &mut modulus, &r, p);
            candidate = acc.par_iter().map(|x| rational_reconstruct(x, &modulus)).collect();
        }
        if tried > MAX_PRIMES {
            return Err(Error::SizeCap(format!("rational reconstruction did not stabilize after {tried} primes")));
        }
    }
}

fn crt_accumulate(acc: &mut [BigInt], modulus: &mut BigInt, r: &[u64], p: u64) {
    let pb = BigInt::from(p);
    let minv = {
        let m = modulus.mod_floor(&pb).to_u64().unwrap();
        powmod(m, p - 2, p)
    };
    let m = modulus.clone();
    acc.par_iter_mut().zip(r.par_iter()).for_each(|(x, &rv)| {
        let xm = x.mod_floor(&pb).to_u64().unwrap();
        let diff = (rv + p - xm) % p;
        let t = mulmod(diff, minv, p);
        if t != 0 {
            *x += &m * BigInt::from(t);
        }
    });
    *modulus *= pb;
    // symmetric range keeps reconstruction of negative values straightforward
}

/// A downward-closed set of exponent vectors.
#[derive(Clone, Debug)]
pub struct LowerSet {
    pub exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl LowerSet {
    /// Builds from an arbitrary list, which must be downward closed.
    pub fn new(exps: Vec<Vec<u32>>) -> Self {
        let index = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        LowerSet { exps, index }
    }

    /// All exponents in `nvars` variables with total degree at most `deg`.
    pub fn simplex(nvars: usize, deg: u32) -> Self {
        Self::product_of_simplices(&[(nvars, deg)])
    }

    /// Exponents whose blocks (of the given sizes) each have bounded degree.
    pub fn product_of_simplices(blocks: &[(usize, u32)]) -> Self {
        let mut out: Vec<Vec<u32>> = vec![vec![]];
        for &(k, d) in blocks {
            let block = simplex_exps(k, d);
            out = out
                .into_iter()
                .flat_map(|e| {
                    block.iter().map(move |b| {
                        let mut v = e.clone();
                        v.extend_from_slice(b);
                        v
                    })
                })
                .collect();
        }
        Self::new(out)
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.exps.first().map_or(0, Vec::len)
    }

    pub fn position(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Maximal fibers along direction `j`, each as a list of indices with
    /// increasing `j`-exponent starting at zero.
    fn fibers(&self, j: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (i, e) in self.exps.iter().enumerate() {
            if e[j] != 0 {
                continue;
            }
            let mut fiber = vec![i];
            let mut f = e.clone();
            loop {
                f[j] += 1;
                match self.index.get(&f) {
                    Some(&k) => fiber.push(k),
                    None => break,
                }
            }
            out.push(fiber);
        }
        out
    }

    /// Grid point attached to each exponent: coordinate `j` is `nodes[j][e_j]`.
    pub fn grid_point(&self, i: usize, nodes: &[Vec<Fe>]) -> Vec<Fe> {
        self.exps[i].iter().enumerate().map(|(j, &k)| nodes[j][k as usize]).collect()
    }

    /// Converts values at the grid points (in index order) into monomial
    /// coefficients, in place.
    pub fn interpolate(&self, f: &Field, nodes: &[Vec<Fe>], values: &mut [Fe]) {
        let n = self.nvars();
        let fibers: Vec<Vec<Vec<usize>>> = (0..n).map(|j| self.fibers(j)).collect();
        // divided differences give Newton coefficients
        for j in 0..n {
            let a = &nodes[j];
            let len = self.exps.iter().map(|e| e[j] as usize + 1).max().unwrap_or(0);
            let inv: Vec<Vec<Fe>> = (0..len)
                .map(|k| (0..len).map(|i| if i >= k && k > 0 { f.inv(f.sub(a[i], a[i - k])) } else { 0 }).collect())
                .collect();
            for fiber in &fibers[j] {
                let m = fiber.len();
                for k in 1..m {
                    for i in (k..m).rev() {
                        let num = f.sub(values[fiber[i]], values[fiber[i - 1]]);
                        values[fiber[i]] = f.mul(num, inv[k][i]);
                    }
                }
            }
        }
        // Newton basis to monomials
        for j in 0..n {
            let a = &nodes[j];
            for fiber in &fibers[j] {
                let m = fiber.len();
                let mut c: Vec<Fe> = vec![0; m];
                for k in (0..m).rev() {
                    // c <- c * (x - a_k) + coeff_k
                    let mut next = vec![0; m];
                    for t in 0..m {
                        if c[t] == 0 {
                            continue;
                        }
                        if t + 1 < m {
                            next[t + 1] = f.add(next[t + 1], c[t]);
                        }
                        next[t] = f.sub(next[t], f.mul(c[t], a[k]));
                    }
                    next[0] = f.add(next[0], values[fiber[k]]);
                    c = next;
                }
                for (t, &idx) in fiber.iter().enumerate() {
                    values[idx] = c[t];
                }
            }
        }
    }
}

fn simplex_exps(k: usize, d: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in simplex_exps(k - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Distinct pseudo-random interpolation nodes per variable, fixed by `p`.
pub fn default_nodes(f: &Field, nvars: usize, count: usize) -> Vec<Vec<Fe>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(f.p());
    (0..nvars)
        .map(|_| {
            let mut seen = std::collections::HashSet::new();
            let mut v = Vec::with_capacity(count);
            while v.len() < count {
                let x = f.random_nonzero(&mut rng);
                if seen.insert(x) {
                    v.push(x);
                }
            }
            v
        })
        .collect()
}

/// A polynomial with coefficients reduced modulo `p`, ready for fast evaluation.
#[derive(Clone, Debug)]
pub struct ModPoly {
    terms: Vec<(Vec<u32>, Fe)>,
    maxdeg: Vec<u32>,
}

impl ModPoly {
    /// `None` if a denominator vanishes modulo `p`.
    pub fn new(f: &Field, g: &Poly) -> Option<Self> {
        let terms: Vec<(Vec<u32>, Fe)> =
            g.terms().map(|(m, c)| f.from_rat(c).map(|v| (m.0.clone(), v))).collect::<Option<_>>()?;
        let maxdeg = (0..g.nvars()).map(|i| g.degree_in(i)).collect();
        Some(ModPoly { terms, maxdeg })
    }

    pub fn eval(&self, f: &Field, pt: &[Fe]) -> Fe {
        let powers: Vec<Vec<Fe>> = self
            .maxdeg
            .iter()
            .zip(pt)
            .map(|(&d, &x)| {
                let mut p = vec![f.one()];
                for k in 0..d as usize {
                    p.push(f.mul(p[k], x));
                }
                p
            })
            .collect();
        self.eval_with_powers(f, &powers)
    }

    pub fn eval_with_powers(&self, f: &Field, powers: &[Vec<Fe>]) -> Fe {
        let mut s = 0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = f.mul(t, powers[i][k as usize]);
                }
            }
            s = f.add(s, t);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Recovers a homogeneous polynomial of degree `degree` in `vars` from a
/// black box. For each prime, `prepare` builds per-prime state (or reports the
/// prime unlucky) and `eval` evaluates at a point given in Montgomery form.
/// The first variable is set to one during interpolation.
pub fn interpolate_homogeneous<S, P, E>(vars: &[String], degree: u32, prepare: P, eval: E) -> Result<Poly>
where
    S: Sync,
    P: Fn(&Field) -> Option<S> + Sync,
    E: Fn(&Field, &S, &[Fe]) -> Option<Fe> + Sync,
{
    let n = vars.len();
    assert!(n >= 1);
    let set = LowerSet::simplex(n - 1, degree);
    let coeffs = interpolate_on(&set, degree as usize + 1, true, &prepare, &eval)?;
    Ok(Poly::from_terms(
        vars,
        set.exps.iter().zip(coeffs).map(|(e, c)| {
            let mut full = vec![degree - e.iter().sum::<u32>()];
            full.extend_from_slice(e);
            (full, c)
        }),
    ))
}

/// Like [`interpolate_homogeneous`] for a polynomial of total degree at most `degree`.
pub fn interpolate_dense<S, P, E>(vars: &[String], degree: u32, prepare: P, eval: E) -> Result<Poly>
where
    S: Sync,
    P: Fn(&Field) -> Option<S> + Sync,
    E: Fn(&Field, &S, &[Fe]) -> Option<Fe> + Sync,
{
    let set = LowerSet::simplex(vars.len(), degree);
    let coeffs = interpolate_on(&set, degree as usize + 1, false, &prepare, &eval)?;
    Ok(Poly::from_terms(vars, set.exps.iter().cloned().zip(coeffs)))
}

/// Interpolates on a lower set; with `leading_one` a coordinate fixed to one
/// is prepended to every evaluation point.
pub fn interpolate_on<S, P, E>(set: &LowerSet, nodes_per_var: usize, leading_one: bool, prepare: &P, eval: &E) -> Result<Vec<Rat>>
where
    S: Sync,
    P: Fn(&Field) -> Option<S> + Sync,
    E: Fn(&Field, &S, &[Fe]) -> Option<Fe> + Sync,
{
    let nv = set.nvars();
    reconstruct_rationals(set.len(), |f| {
        let state = prepare(f)?;
        let nodes = default_nodes(f, nv, nodes_per_var);
        let vals: Option<Vec<Fe>> = (0..set.len())
            .into_par_iter()
            .map(|i| {
                let mut pt = Vec::with_capacity(nv + 1);
                if leading_one {
                    pt.push(f.one());
                }
                pt.extend(set.grid_point(i, &nodes));
                eval(f, &state, &pt)
            })
            .collect();
        let mut vals = vals?;
        set.interpolate(f, &nodes, &mut vals);
        Some(vals.into_iter().map(|v| f.dec(v)).collect())
    })
}

/// Determinant by Gaussian elimination over the field.
pub fn det_mod(f: &Field, mut m: Vec<Vec<Fe>>) -> Fe {
    let n = m.len();
    let mut det = f.one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c] != 0) else { return 0 };
        if piv != c {
            m.swap(piv, c);
            det = f.neg(det);
        }
        det = f.mul(det, m[c][c]);
        let inv = f.inv(m[c][c]);
        let (top, bottom) = m.split_at_mut(c + 1);
        let prow = &top[c];
        for row in bottom.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let factor = f.mul(row[c], inv);
            for k in c..n {
                row[k] = f.sub(row[k], f.mul(factor, prow[k]));
            }
        }
    }
    det
}

/// Basis of the right kernel of `rows` (each of length `ncols`): one vector
/// per free column, with a one there and zeros at the other free columns.
pub fn nullspace_mod(f: &Field, mut rows: Vec<Vec<Fe>>, ncols: usize) -> Vec<Vec<Fe>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(piv, r);
        let inv = f.inv(rows[r][c]);
        for k in c..ncols {
            rows[r][k] = f.mul(rows[r][k], inv);
        }
        let (top, bottom) = rows.split_at_mut(r + 1);
        let prow = &top[r][c..];
        bottom.par_iter_mut().for_each(|row| {
            let factor = row[c];
            if factor != 0 {
                for (x, &pv) in row[c..].iter_mut().zip(prow) {
                    *x = f.sub(*x, f.mul(factor, pv));
                }
            }
        });
        pivots.push(c);
        r += 1;
    }
    let is_pivot: Vec<bool> = (0..ncols).map(|c| pivots.contains(&c)).collect();
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|fc| {
            let mut v = vec![0; ncols];
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate().rev() {
                // row i: x_pc + sum_{k > pc} row[k] x_k = 0
                let s = rows[i][pc + 1..]
                    .iter()
                    .zip(&v[pc + 1..])
                    .fold(0, |s, (&a, &x)| if a == 0 || x == 0 { s } else { f.add(s, f.mul(a, x)) });
                v[pc] = f.neg(s);
            }
            v
        })
        .collect()
}

/// Dense univariate polynomials over the field, lowest degree first.
pub mod upoly {
    use super::{Fe, Field};

    pub fn trim(a: &mut Vec<Fe>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn eval(f: &Field, a: &[Fe], x: Fe) -> Fe {
        a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn mul(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo nonzero `b`.
    pub fn rem(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        divrem(f, a, b).1
    }

    pub fn divrem(f: &Field, a: &[Fe], b: &[Fe]) -> (Vec<Fe>, Vec<Fe>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let inv = f.inv(b[db]);
        if r.len() < b.len() {
            return (vec![], r);
        }
        let mut q = vec![0; r.len() - db];
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1 - db;
            let c = f.mul(*r.last().unwrap(), inv);
            q[k] = c;
            for (i, &bc) in b.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, bc));
            }
            r.pop();
            trim(&mut r);
        }
        trim(&mut q);
        (q, r)
    }

    pub fn monic(f: &Field, a: &[Fe]) -> Vec<Fe> {
        let inv = f.inv(*a.last().unwrap());
        a.iter().map(|&c| f.mul(c, inv)).collect()
    }

    pub fn gcd(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            monic(f, &a)
        }
    }

    /// Resultant of `a` and `b` with respect to their actual degrees.
    pub fn resultant(f: &Field, a: &[Fe], b: &[Fe]) -> Fe {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        if a.is_empty() || b.is_empty() {
            return 0;
        }
        let mut res = f.one();
        loop {
            let (da, db) = (a.len() - 1, b.len() - 1);
            if db == 0 {
                return f.mul(res, f.pow(b[0], da as u64));
            }
            let r = rem(f, &a, &b);
            if r.is_empty() {
                return 0;
            }
            res = f.mul(res, f.pow(b[db], (da - (r.len() - 1)) as u64));
            if da * db % 2 == 1 {
                res = f.neg(res);
            }
            a = b;
            b = r;
        }
    }

    /// `base^e mod m`.
    pub fn powmod(f: &Field, base: &[Fe], mut e: u64, m: &[Fe]) -> Vec<Fe> {
        let mut result = vec![f.one()];
        let mut b = rem(f, base, m);
        while e > 0 {
            if e & 1 == 1 {
                result = rem(f, &mul(f, &result, &b), m);
            }
            b = rem(f, &mul(f, &b, &b), m);
            e >>= 1;
        }
        result
    }

    /// Distinct roots in the field, sorted by residue.
    pub fn roots(f: &Field, a: &[Fe], rng: &mut impl rand::Rng) -> Vec<Fe> {
        let mut a = a.to_vec();
        trim(&mut a);
        if a.len() <= 1 {
            return vec![];
        }
        let a = monic(f, &a);
        let x = vec![0, f.one()];
        let mut xp = powmod(f, &x, f.p(), &a);
        xp.resize(xp.len().max(2), 0);
        xp[1] = f.sub(xp[1], f.one());
        trim(&mut xp);
        let g = gcd(f, &a, &xp);
        let mut out = Vec::new();
        split(f, g, rng, &mut out);
        out.sort_by_key(|&r| f.dec(r));
        out
    }

    fn split(f: &Field, g: Vec<Fe>, rng: &mut impl rand::Rng, out: &mut Vec<Fe>) {
        match g.len() {
            0 | 1 => {}
            2 => out.push(f.neg(f.mul(g[0], f.inv(g[1])))),
            _ => loop {
                let shift = f.random(rng);
                let h = powmod(f, &[shift, f.one()], (f.p() - 1) / 2, &g);
                let mut h = h;
                if h.is_empty() {
                    continue;
                }
                h[0] = f.sub(h[0], f.one());
                trim(&mut h);
                let d = gcd(f, &g, &h);
                if d.len() > 1 && d.len() < g.len() {
                    let (q, _) = divrem(f, &g, &d);
                    split(f, d, rng, out);
                    split(f, monic(f, &q), rng, out);
                    return;
                }
            },
        }
    }
}
