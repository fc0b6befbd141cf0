use num_traits::Zero;

use super::{certify_factor, expected_degree, split_factors, DiscriminantResult, ExpectedDegree, Factor, Leftover, Method};
use crate::arrangement::Arrangement;
use crate::critical::Tolerances;
use crate::error::Result;
use crate::linalg::{det, select_rows};
use crate::poly::modular::{nullspace_mod, reconstruct_rationals, upoly, Fe, Field, PrimeStream};
use crate::poly::{Monomial, Poly};
use crate::rational::{binomial, subsets, Rat};
use crate::reciprocal::kernel_basis;
use crate::rng::{substream, substream_n, Rng};

#[derive(Clone, Debug)]
pub struct ElimOptions {
    pub degree_bound: Option<u32>,
    pub seed: u64,
    /// Zero-locus samples per factor; a majority must test near.
    pub certify_samples: usize,
    pub tol: Tolerances,
}

impl Default for ElimOptions {
    fn default() -> Self {
        ElimOptions { degree_bound: None, seed: 0, certify_samples: 3, tol: Tolerances::default() }
    }
}

const EXTRA_ROWS: usize = 12;
const MAX_MONOMIALS: usize = 6000;

struct Setup {
    d: usize,
    n1: usize,
    k: usize,
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    kern: Vec<Vec<Rat>>,
    minors: Vec<(Vec<usize>, Rat)>,
}

impl Setup {
    fn new(arr: &Arrangement) -> Result<Self> {
        let a = arr.a().to_vec();
        let kern = kernel_basis(&a)?;
        let minors = subsets(arr.n_plus_1(), arr.d())
            .into_iter()
            .filter_map(|s| {
                let m = det(&select_rows(&a, &s));
                (!m.is_zero()).then(|| (s, &m * &m))
            })
            .collect();
        Ok(Setup {
            d: arr.d(),
            n1: arr.n_plus_1(),
            k: arr.n_plus_1() - arr.d(),
            a,
            b: arr.b().to_vec(),
            kern,
            minors,
        })
    }
}

/// The ramification data reduced modulo one prime.
///
/// With `v = K w` spanning `ker(A^T)` and `u_i = l_i(x) v_i`, the point `u`
/// has a degenerate critical point at `x` exactly when
/// `h(x, w) = sum_I |A_I|^2 v^I prod_{q not in I} l_q(x)` vanishes.
struct ModSetup {
    f: Field,
    d: usize,
    n1: usize,
    k: usize,
    a: Vec<Vec<Fe>>,
    b: Vec<Fe>,
    kern: Vec<Vec<Fe>>,
    minors: Vec<(Vec<usize>, Fe)>,
}

struct Sample {
    u: Vec<Fe>,
    full: Option<bool>,
}

impl ModSetup {
    fn new(s: &Setup, f: Field) -> Option<Self> {
        let conv = |m: &[Vec<Rat>]| -> Option<Vec<Vec<Fe>>> {
            m.iter().map(|r| r.iter().map(|x| f.from_rat(x)).collect()).collect()
        };
        let minors = s
            .minors
            .iter()
            .map(|(i, m)| f.from_rat(m).filter(|&x| x != 0).map(|x| (i.clone(), x)))
            .collect::<Option<Vec<_>>>()?;
        Some(ModSetup {
            d: s.d,
            n1: s.n1,
            k: s.k,
            a: conv(&s.a)?,
            b: s.b.iter().map(|x| f.from_rat(x)).collect::<Option<Vec<_>>>()?,
            kern: conv(&s.kern)?,
            minors,
            f,
        })
    }

    fn forms(&self, x: &[Fe]) -> Vec<Fe> {
        let f = &self.f;
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, &b)| row.iter().zip(x).fold(b, |acc, (&a, &x)| f.add(acc, f.mul(a, x))))
            .collect()
    }

    fn sample(&self, rng: &mut Rng) -> Vec<Sample> {
        if self.k >= 2 {
            self.sample_in_w(rng)
        } else {
            self.sample_in_x(rng)
        }
    }

    fn sample_in_w(&self, rng: &mut Rng) -> Vec<Sample> {
        let f = &self.f;
        let x: Vec<Fe> = (0..self.d).map(|_| f.random(rng)).collect();
        let ell = self.forms(&x);
        if ell.contains(&0) {
            return vec![];
        }
        let head: Vec<Fe> = (0..self.k - 1).map(|_| f.random(rng)).collect();
        let alpha: Vec<Fe> =
            self.kern.iter().map(|r| r.iter().zip(&head).fold(0, |acc, (&k, &w)| f.add(acc, f.mul(k, w)))).collect();
        let beta: Vec<Fe> = self.kern.iter().map(|r| r[self.k - 1]).collect();
        let inv: Vec<Fe> = ell.iter().map(|&l| f.inv(l)).collect();
        let lprod = ell.iter().fold(f.one(), |acc, &l| f.mul(acc, l));
        let mut h = vec![0; self.d + 1];
        for (idx, m) in &self.minors {
            let mut coef = f.mul(*m, lprod);
            let mut poly = vec![f.one()];
            for &i in idx {
                coef = f.mul(coef, inv[i]);
                poly = mul_linear(f, &poly, alpha[i], beta[i]);
            }
            for (c, p) in h.iter_mut().zip(&poly) {
                *c = f.add(*c, f.mul(coef, *p));
            }
        }
        upoly::roots(f, &h, rng)
            .into_iter()
            .filter_map(|t| {
                let v: Vec<Fe> = alpha.iter().zip(&beta).map(|(&a, &b)| f.add(a, f.mul(b, t))).collect();
                self.finish(&ell, &v)
            })
            .collect()
    }

    fn sample_in_x(&self, rng: &mut Rng) -> Vec<Sample> {
        let f = &self.f;
        let d = self.d;
        let head: Vec<Fe> = (0..d - 1).map(|_| f.random(rng)).collect();
        let gamma: Vec<Fe> = self
            .a
            .iter()
            .zip(&self.b)
            .map(|(row, &b)| row[..d - 1].iter().zip(&head).fold(b, |acc, (&a, &x)| f.add(acc, f.mul(a, x))))
            .collect();
        let slope: Vec<Fe> = self.a.iter().map(|r| r[d - 1]).collect();
        let v: Vec<Fe> = self.kern.iter().map(|r| r[0]).collect();
        let mut h = vec![0; self.n1 - d + 1];
        for (idx, m) in &self.minors {
            let mut coef = *m;
            let mut poly = vec![f.one()];
            for q in 0..self.n1 {
                if idx.contains(&q) {
                    coef = f.mul(coef, v[q]);
                } else {
                    poly = mul_linear(f, &poly, gamma[q], slope[q]);
                }
            }
            for (c, p) in h.iter_mut().zip(&poly) {
                *c = f.add(*c, f.mul(coef, *p));
            }
        }
        upoly::roots(f, &h, rng)
            .into_iter()
            .filter_map(|t| {
                let mut x = head.clone();
                x.push(t);
                let ell = self.forms(&x);
                if ell.contains(&0) {
                    return None;
                }
                self.finish(&ell, &v)
            })
            .collect()
    }

    fn finish(&self, ell: &[Fe], v: &[Fe]) -> Option<Sample> {
        let f = &self.f;
        let u: Vec<Fe> = ell.iter().zip(v).map(|(&l, &v)| f.mul(l, v)).collect();
        if u.iter().all(|&c| c == 0) {
            return None;
        }
        Some(Sample { full: self.full_rank(ell, v), u })
    }

    /// Whether the parametrization restricted to `{h = 0}` has full rank `n`
    /// at the point; `None` at singular points of `{h = 0}`.
    fn full_rank(&self, ell: &[Fe], v: &[Fe]) -> Option<bool> {
        let f = &self.f;
        let (d, k, n1) = (self.d, self.k, self.n1);
        let inv: Vec<Fe> = ell.iter().map(|&l| f.inv(l)).collect();
        let lprod = ell.iter().fold(f.one(), |acc, &l| f.mul(acc, l));
        let mut grad = vec![0; n1];
        for (idx, m) in &self.minors {
            let mut pc = lprod;
            let mut vi = f.one();
            for &i in idx {
                pc = f.mul(pc, inv[i]);
                vi = f.mul(vi, v[i]);
            }
            let mv = f.mul(*m, vi);
            for q in (0..n1).filter(|q| !idx.contains(q)) {
                let s = f.mul(mv, f.mul(pc, inv[q]));
                for j in 0..d {
                    grad[j] = f.add(grad[j], f.mul(s, self.a[q][j]));
                }
            }
            let mp = f.mul(*m, pc);
            for (pos, &i) in idx.iter().enumerate() {
                let rest = idx.iter().enumerate().filter(|&(p, _)| p != pos).fold(f.one(), |acc, (_, &j)| f.mul(acc, v[j]));
                let s = f.mul(mp, rest);
                for mm in 0..k {
                    grad[d + mm] = f.add(grad[d + mm], f.mul(s, self.kern[i][mm]));
                }
            }
        }
        let q = grad.iter().position(|&g| g != 0)?;
        let gq = f.inv(grad[q]);
        let jac = |i: usize, c: usize| if c < d { f.mul(self.a[i][c], v[i]) } else { f.mul(ell[i], self.kern[i][c - d]) };
        let rows: Vec<Vec<Fe>> = (0..n1)
            .map(|i| {
                (0..n1)
                    .filter(|&c| c != q)
                    .map(|c| f.sub(jac(i, c), f.mul(f.mul(grad[c], gq), jac(i, q))))
                    .collect()
            })
            .collect();
        Some(nullspace_mod(f, rows, n1 - 1).is_empty())
    }
}

fn mul_linear(f: &Field, p: &[Fe], c0: Fe, c1: Fe) -> Vec<Fe> {
    let mut out = vec![0; p.len() + 1];
    for (i, &a) in p.iter().enumerate() {
        out[i] = f.add(out[i], f.mul(a, c0));
        out[i + 1] = f.add(out[i + 1], f.mul(a, c1));
    }
    out
}

struct Sampler<'a> {
    ms: &'a ModSetup,
    rng: Rng,
    full: Vec<Vec<Fe>>,
    low: Vec<Vec<Fe>>,
    singular: usize,
    attempts: usize,
}

impl<'a> Sampler<'a> {
    fn new(ms: &'a ModSetup, seed: u64) -> Self {
        Sampler { rng: substream_n(seed, "elim/samples", ms.f.p()), ms, full: vec![], low: vec![], singular: 0, attempts: 0 }
    }

    fn budget(want: usize) -> usize {
        50 * want + 2000
    }

    fn draw(&mut self) {
        self.attempts += 1;
        for s in self.ms.sample(&mut self.rng) {
            match s.full {
                Some(true) => self.full.push(s.u),
                Some(false) => self.low.push(s.u),
                None => self.singular += 1,
            }
        }
    }

    fn exhausted(&self, want: usize) -> bool {
        let start = self.attempts >= 2000 && self.full.is_empty() && self.low.is_empty();
        start || self.attempts >= Self::budget(want)
    }

    fn fill(&mut self, want: usize) -> bool {
        while self.full.len() < want {
            if self.exhausted(want) {
                return false;
            }
            self.draw();
        }
        true
    }

    fn fill_low(&mut self, want: usize) -> bool {
        while self.low.len() < want {
            if self.exhausted(want) {
                return false;
            }
            self.draw();
        }
        true
    }
}

/// Exponent vectors of degree `deg` in `n` variables, grevlex descending.
fn monomials(n: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, deg: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n - 1 {
            cur.push(deg);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=deg {
            cur.push(e);
            rec(n, deg - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, deg, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| Monomial(b.clone()).cmp(&Monomial(a.clone())));
    out
}

fn kernel_at(f: &Field, samples: &[Vec<Fe>], mons: &[Vec<u32>], deg: u32) -> Vec<Vec<Fe>> {
    let rows: Vec<Vec<Fe>> = samples
        .iter()
        .map(|u| {
            let pw: Vec<Vec<Fe>> = u
                .iter()
                .map(|&x| {
                    let mut p = vec![f.one(); deg as usize + 1];
                    for e in 1..p.len() {
                        p[e] = f.mul(p[e - 1], x);
                    }
                    p
                })
                .collect();
            mons.iter().map(|m| m.iter().enumerate().fold(f.one(), |acc, (i, &e)| f.mul(acc, pw[i][e as usize]))).collect()
        })
        .collect();
    nullspace_mod(f, rows, mons.len())
}

fn normalize(f: &Field, v: &[Fe], lead: usize) -> Option<Vec<u64>> {
    if v[..lead].iter().any(|&c| c != 0) || v[lead] == 0 {
        return None;
    }
    let inv = f.inv(v[lead]);
    Some(v.iter().map(|&c| f.dec(f.mul(c, inv))).collect())
}

enum Search {
    Found { deg: u32, vector: Vec<Fe> },
    Empty,
    Unresolved(String),
}

fn search_degree(ms: &ModSetup, sampler: &mut Sampler, order: &[u32]) -> Search {
    let n1 = ms.n1;
    let mut lo = 1;
    let mut hi = u32::MAX;
    for &deg in order {
        if deg < lo || deg > hi {
            continue;
        }
        let m = binomial(deg as usize + n1 - 1, n1 - 1) as usize;
        if m > MAX_MONOMIALS {
            return Search::Unresolved(format!("degree {deg} needs {m} monomials, above the cap of {MAX_MONOMIALS}"));
        }
        if !sampler.fill(m + EXTRA_ROWS) {
            if sampler.full.is_empty() {
                return Search::Empty;
            }
            return Search::Unresolved(format!("only {} full-rank samples found", sampler.full.len()));
        }
        let mons = monomials(n1, deg);
        let ker = kernel_at(&ms.f, &sampler.full[..m + EXTRA_ROWS], &mons, deg);
        match ker.len() {
            0 => lo = lo.max(deg + 1),
            1 => return Search::Found { deg, vector: ker.into_iter().next().unwrap() },
            _ if deg == order[0] && order.len() > 1 => hi = deg - 1,
            dim => {
                return Search::Unresolved(format!("{dim} independent polynomials of degree {deg} vanish on the samples"))
            }
        }
    }
    Search::Unresolved("no vanishing polynomial up to the degree bound".into())
}

fn first_setup(setup: &Setup, primes: &mut PrimeStream) -> (ModSetup, u64) {
    loop {
        let p = primes.next().expect("prime stream is unbounded");
        if let Some(ms) = ModSetup::new(setup, Field::new(p)) {
            return (ms, p);
        }
    }
}

/// Linear forms vanishing on the samples whose image has lower dimension.
fn low_rank_span(setup: &Setup, seed: u64, want: usize) -> Result<Option<Vec<Vec<Rat>>>> {
    let n1 = setup.n1;
    let (ms0, p0) = first_setup(setup, &mut PrimeStream::new());
    let mut s0 = Sampler::new(&ms0, seed);
    if !s0.fill_low(want) {
        return Ok(None);
    }
    let mons = monomials(n1, 1);
    let basis = kernel_at(&ms0.f, &s0.low[..want], &mons, 1);
    if basis.is_empty() {
        return Ok(Some(vec![]));
    }
    let dim = basis.len();
    let pattern = |b: &[Vec<Fe>]| -> Vec<usize> { b.iter().map(|v| v.iter().rposition(|&c| c != 0).unwrap_or(0)).collect() };
    let pat0 = pattern(&basis);
    let flat0: Vec<u64> = basis.iter().flatten().map(|&c| ms0.f.dec(c)).collect();
    let coeffs = reconstruct_rationals(dim * n1, |f| {
        if f.p() == p0 {
            return Some(flat0.clone());
        }
        let ms = ModSetup::new(setup, *f)?;
        let mut s = Sampler::new(&ms, seed);
        if !s.fill_low(want) {
            return None;
        }
        let b = kernel_at(f, &s.low[..want], &mons, 1);
        if b.len() != dim || pattern(&b) != pat0 {
            return None;
        }
        Some(b.iter().flatten().map(|&c| f.dec(c)).collect())
    })?;
    let pos: Vec<usize> = (0..n1).map(|i| mons.iter().position(|m| m[i] == 1).expect("linear monomial")).collect();
    let forms = coeffs.chunks(n1).map(|c| pos.iter().map(|&p| c[p].clone()).collect()).collect();
    Ok(Some(forms))
}

/// Logarithmic discriminant by modular implicitization of the locus of
/// degenerate critical points, with factor splitting and numerical
/// certification of every factor.
pub fn logdisc_elim(arr: &Arrangement, opts: &ElimOptions) -> Result<DiscriminantResult> {
    let setup = Setup::new(arr)?;
    let vars = arr.u_vars();
    let n1 = setup.n1;
    let n = n1 - 1;
    let d = setup.d;
    let seed = opts.seed;
    let expected = expected_degree(arr);
    let bound = opts.degree_bound.unwrap_or_else(|| match expected {
        ExpectedDegree::Value(e) if e > 0 => e as u32,
        _ => (4 * d as u128 * binomial(n.saturating_sub(1), d)).max(4) as u32,
    });
    let mut order: Vec<u32> = Vec::new();
    if let ExpectedDegree::Value(e) = expected {
        if e >= 1 && e as u32 <= bound {
            order.push(e as u32);
        }
    }
    let first = order.first().copied();
    order.extend((1..=bound).filter(|&d| Some(d) != first));

    let mut primes = PrimeStream::new();
    let (ms0, p0) = first_setup(&setup, &mut primes);
    let mut s0 = Sampler::new(&ms0, seed);
    let search = search_degree(&ms0, &mut s0, &order);
    let mut notes = Vec::new();
    let mut factors = Vec::new();
    let mut leftover = Vec::new();

    match search {
        Search::Empty => notes.push("no degenerate critical points off the hyperplanes: the discriminant is empty".into()),
        Search::Unresolved(why) => leftover.push(Leftover { polys: vec![], note: format!("unresolved: {why}") }),
        Search::Found { deg, vector } => {
            let mons = monomials(n1, deg);
            let m = mons.len();
            let lead = vector.iter().position(|&c| c != 0).expect("kernel vector is nonzero");
            let first = normalize(&ms0.f, &vector, lead).expect("leading entry is nonzero");
            let coeffs = reconstruct_rationals(m, |f| {
                if f.p() == p0 {
                    return Some(first.clone());
                }
                let ms = ModSetup::new(&setup, *f)?;
                let mut s = Sampler::new(&ms, seed);
                if !s.fill(m + EXTRA_ROWS) {
                    return None;
                }
                let ker = kernel_at(f, &s.full[..m + EXTRA_ROWS], &mons, deg);
                if ker.len() != 1 {
                    return None;
                }
                normalize(f, &ker[0], lead)
            })?;
            let poly = Poly::from_terms(&vars, mons.into_iter().zip(coeffs)).canonicalize()?;
            notes.push(format!("vanishing polynomial of degree {deg} found by implicitization"));
            let mut rng = substream(seed, "elim/split");
            for (p, mult) in split_factors(&poly, &mut rng) {
                let near = certify_factor(arr, &p, seed, opts.certify_samples, &opts.tol)?;
                factors.push(Factor { certified: 2 * near > opts.certify_samples, poly: p, multiplicity: mult, samples: opts.certify_samples, near });
            }
        }
    }

    notes.push(format!(
        "samples: {} full rank, {} lower rank, {} singular",
        s0.full.len(),
        s0.low.len(),
        s0.singular
    ));
    let total = s0.full.len() + s0.low.len();
    if s0.low.len() >= 3 && 20 * s0.low.len() >= total {
        let want = n1 + 8;
        let span = low_rank_span(&setup, seed, want)?;
        let polys = match span {
            Some(forms) => forms
                .iter()
                .map(|c| Poly::linear(&vars, c, &Rat::zero()).canonicalize())
                .collect::<Result<Vec<_>>>()?,
            None => vec![],
        };
        let note = if polys.is_empty() {
            "possible higher-codimension component".to_string()
        } else {
            format!("possible higher-codimension component (codimension {} linear space)", polys.len())
        };
        leftover.push(Leftover { polys, note });
    }
    Ok(DiscriminantResult::new(&vars, factors, leftover, Method::Elimination, notes))
}
