//! The soft limit of particle 5 on M_{0,6}. At epsilon = 0 the first two
//! scattering equations decouple from the third; the second factor of the
//! initial form records a double root of the third equation in `x3` over a
//! critical point `(x1, x2)` of the first two. It is recovered from a modular
//! black box for `Res_x1(g2, Disc_x3(g3))` after dividing out the linear
//! forms that divide it identically.

use num_traits::{One, Zero};
use rand::Rng as _;
use serde::Serialize;

use super::{m05_discriminant, soft_limit_weight, MandelstamMap};
use crate::discriminant::subset_sum;
use crate::error::{Error, Result};
use crate::poly::modular::{interpolate_on, upoly, Fe, Field, LowerSet};
use crate::poly::Poly;
use crate::rational::{ratio, Rat};
use crate::rng::{substream, Rng};

const S13: usize = 0;
const S14: usize = 1;
const S15: usize = 2;
const S23: usize = 3;
const S24: usize = 4;
const S25: usize = 5;
const S34: usize = 6;
const S35: usize = 7;
const S45: usize = 8;
const HARD: [usize; 5] = [S13, S14, S23, S24, S34];
const SOFT: [usize; 4] = [S15, S25, S35, S45];
const LINE_NODES: usize = 80;
const DISCOVERY_PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Debug, Serialize)]
pub struct SpuriousFactor {
    pub form: String,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SoftLimitReport {
    pub m: usize,
    pub k: usize,
    pub weight: Vec<i64>,
    pub completed: bool,
    pub raw_degree: Option<u32>,
    pub spurious: Vec<SpuriousFactor>,
    pub lower_factor: String,
    pub lower_multiplicity: u32,
    pub second_factor_degree: Option<u32>,
    /// Degrees in the hard block `(s13, s14, s23, s24, s34)` and the soft block.
    pub second_factor_bidegree: Option<(u32, u32)>,
    pub second_factor_terms: usize,
    #[serde(skip)]
    pub second_factor: Option<Poly>,
    pub product_degree: Option<u32>,
    pub product_homogeneous: bool,
    pub divides_exactly: bool,
    pub multiplicity_exact: bool,
    pub zero_checks: usize,
    pub zero_checks_passed: usize,
    pub notes: Vec<String>,
}

fn padd(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        *o = f.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0));
    }
    upoly::trim(&mut out);
    out
}

fn pscale(f: &Field, a: &[Fe], c: Fe) -> Vec<Fe> {
    let mut out: Vec<Fe> = a.iter().map(|&x| f.mul(x, c)).collect();
    upoly::trim(&mut out);
    out
}

/// Polynomials in `x3` with coefficients in `F_p[x1]`.
fn bmul(f: &Field, a: &[Vec<Fe>], b: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let mut out = vec![Vec::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = padd(f, &out[i + j], &upoly::mul(f, x, y));
        }
    }
    out
}

fn badd(f: &Field, a: &[Vec<Fe>], b: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    (0..a.len().max(b.len()))
        .map(|i| padd(f, a.get(i).map_or(&[][..], |v| v), b.get(i).map_or(&[][..], |v| v)))
        .collect()
}

fn bscale(f: &Field, a: &[Vec<Fe>], c: Fe) -> Vec<Vec<Fe>> {
    a.iter().map(|x| pscale(f, x, c)).collect()
}

/// `Res_x1(g2, Disc_x3(g3))` at `s`, or `None` when a leading coefficient
/// drops.
fn raw_value(f: &Field, s: &[Fe], disc_degree: Option<usize>) -> Option<(Fe, usize)> {
    let one = f.one();
    let h = f.add(f.add(s[S13], s[S23]), s[S34]);
    let l = vec![f.neg(s[S13]), f.add(s[S13], s[S23])];
    let m = vec![f.neg(f.add(s[S13], s[S34])), h];
    let n = vec![f.neg(s[S13]), h];
    let p = upoly::mul(f, &[0, one], &m);
    let x1 = vec![0, one];
    let x1m1 = vec![f.neg(one), one];
    // x2 = P / L; g2 = s14 (x1 - 1) N + s24 x1 M + M N
    let g2 = padd(
        f,
        &padd(f, &pscale(f, &upoly::mul(f, &x1m1, &n), s[S14]), &pscale(f, &p, s[S24])),
        &upoly::mul(f, &m, &n),
    );
    if g2.len() != 3 {
        return None;
    }
    let a3 = vec![x1.clone(), vec![f.neg(one), f.neg(one)], vec![one]];
    let b3 = vec![vec![], vec![0, f.neg(one)], vec![one]];
    let c3 = vec![vec![], vec![f.neg(one)], vec![one]];
    let lin = vec![pscale(f, &p, f.neg(one)), l.clone()];
    let shift = vec![pscale(f, &x1, f.neg(one)), vec![one]];
    let soft = badd(f, &badd(f, &bscale(f, &a3, s[S15]), &bscale(f, &b3, s[S25])), &bscale(f, &c3, s[S35]));
    let tail = bmul(f, &bmul(f, &c3, &shift), &[l]);
    let g3 = badd(f, &bmul(f, &soft, &lin), &bscale(f, &tail, s[S45]));
    if g3.len() != 4 || g3[3].is_empty() {
        return None;
    }
    let (a, b, c, d) = (&g3[3], &g3[2], &g3[1], &g3[0]);
    let mul = |x: &[Fe], y: &[Fe]| upoly::mul(f, x, y);
    let k = |v: i64| f.from_i64(v);
    // 18abcd - 4b^3 d + b^2 c^2 - 4ac^3 - 27a^2 d^2
    let ab = mul(a, b);
    let cd = mul(c, d);
    let bb = mul(b, b);
    let cc = mul(c, c);
    let mut disc = pscale(f, &mul(&ab, &cd), k(18));
    disc = padd(f, &disc, &pscale(f, &mul(&mul(&bb, b), d), k(-4)));
    disc = padd(f, &disc, &mul(&bb, &cc));
    disc = padd(f, &disc, &pscale(f, &mul(&mul(a, &cc), c), k(-4)));
    disc = padd(f, &disc, &pscale(f, &mul(&mul(a, a), &mul(d, d)), k(-27)));
    let deg = disc.len().checked_sub(1)?;
    if disc_degree.is_some_and(|want| want != deg) {
        return None;
    }
    Some((upoly::resultant(f, &g2, &disc), deg))
}

struct BlackBox {
    disc_degree: usize,
    spurious: Vec<(u64, u32)>,
}

impl BlackBox {
    fn new(f: &Field, spurious: Vec<(u64, u32)>, rng: &mut Rng) -> Option<Self> {
        let pt: Vec<Fe> = (0..9).map(|_| f.random_nonzero(rng)).collect();
        let (_, disc_degree) = raw_value(f, &pt, None)?;
        Some(BlackBox { disc_degree, spurious })
    }

    fn raw(&self, f: &Field, s: &[Fe]) -> Option<Fe> {
        raw_value(f, s, Some(self.disc_degree)).map(|(v, _)| v)
    }

    fn stripped(&self, f: &Field, s: &[Fe]) -> Option<Fe> {
        let mut den = f.one();
        for &(mask, k) in &self.spurious {
            let form = (0..9).filter(|i| mask >> i & 1 == 1).fold(0, |acc, i| f.add(acc, s[i]));
            if form == 0 {
                return None;
            }
            den = f.mul(den, f.pow(form, u64::from(k)));
        }
        Some(f.mul(self.raw(f, s)?, f.inv(den)))
    }
}

/// Univariate restriction `t -> g(a + t b)` as coefficients, lowest first.
fn on_line(f: &Field, a: &[Fe], b: &[Fe], g: impl Fn(&[Fe]) -> Option<Fe>, rng: &mut Rng) -> Option<Vec<Fe>> {
    let set = LowerSet::simplex(1, LINE_NODES as u32 - 1);
    let mut nodes = Vec::with_capacity(LINE_NODES);
    while nodes.len() < LINE_NODES {
        let t = f.random(rng);
        if !nodes.contains(&t) {
            nodes.push(t);
        }
    }
    let mut vals = Vec::with_capacity(LINE_NODES);
    for &t in &nodes {
        let pt: Vec<Fe> = a.iter().zip(b).map(|(&x, &y)| f.add(x, f.mul(t, y))).collect();
        vals.push(g(&pt)?);
    }
    let nodes = vec![nodes];
    set.interpolate(f, &nodes, &mut vals);
    upoly::trim(&mut vals);
    Some(vals)
}

/// Multiplicities of every 0/1 coordinate sum dividing the restriction of
/// the raw resultant to a random line.
fn discover_spurious(f: &Field, bb: &BlackBox, rng: &mut Rng) -> Result<(u32, Vec<(u64, u32)>)> {
    let a: Vec<Fe> = (0..9).map(|_| f.random(rng)).collect();
    let b: Vec<Fe> = (0..9).map(|_| f.random(rng)).collect();
    let unlucky = || Error::Numerical("unlucky line in the soft-limit black box".into());
    let mut poly = on_line(f, &a, &b, |s| bb.raw(f, s), rng).ok_or_else(unlucky)?;
    if poly.len() >= LINE_NODES {
        return Err(Error::SizeCap(format!("raw resultant degree exceeds {}", LINE_NODES - 1)));
    }
    let raw_degree = poly.len() as u32 - 1;
    let mut found = Vec::new();
    for mask in 1u64..512 {
        let alpha = (0..9).filter(|i| mask >> i & 1 == 1).fold(0, |acc, i| f.add(acc, a[i]));
        let beta = (0..9).filter(|i| mask >> i & 1 == 1).fold(0, |acc, i| f.add(acc, b[i]));
        if beta == 0 {
            continue;
        }
        let factor = [alpha, beta];
        let mut k = 0;
        loop {
            let (q, r) = upoly::divrem(f, &poly, &factor);
            if !r.is_empty() || poly.len() < 2 {
                break;
            }
            poly = q;
            k += 1;
        }
        if k > 0 {
            found.push((mask, k));
        }
    }
    Ok((raw_degree, found))
}

/// Exact point where `(x1, x2)` is critical for the hard equations and `x3`
/// is a double root of the soft one.
fn degenerate_point(rng: &mut Rng) -> Option<Vec<Rat>> {
    let mut r = || loop {
        let v = ratio(rng.gen_range(-30..=30), rng.gen_range(1..=7));
        if !v.is_zero() && v != Rat::one() {
            break v;
        }
    };
    let (x1, x2, x3) = (r(), r(), r());
    if x1 == x2 || x2 == x3 || x1 == x3 {
        return None;
    }
    let (s13, s14, s34, s15, s25) = (r(), r(), r(), r(), r());
    let one = Rat::one();
    let s23 = (&x1 - &one) * (&s34 / (&x2 - &x1) - &s13 / &x1);
    let s24 = (&x2 - &one) * (-(&s34 / (&x2 - &x1)) - &s14 / &x2);
    let inv = |p: &Rat| (&x3 - p).recip();
    let (r1, r2, r3, r4) = (inv(&Rat::zero()), inv(&one), inv(&x1), inv(&x2));
    let rhs1 = -(&s15 * &r1 + &s25 * &r2);
    let rhs2 = -(&s15 * &r1 * &r1 + &s25 * &r2 * &r2);
    let det = &r3 * &r4 * &r4 - &r4 * &r3 * &r3;
    if det.is_zero() {
        return None;
    }
    let s35 = (&rhs1 * &r4 * &r4 - &r4 * &rhs2) / &det;
    let s45 = (&r3 * &rhs2 - &rhs1 * &r3 * &r3) / &det;
    let s = vec![s13, s14, s15, s23, s24, s25, s34, s35, s45];
    if s.iter().any(Zero::is_zero) {
        return None;
    }
    Some(s)
}

/// Runs the recipe; `progress` receives one line per stage.
pub fn soft_limit_m06_with(seed: u64, progress: &mut dyn FnMut(&str)) -> Result<SoftLimitReport> {
    let map = MandelstamMap::new(6)?;
    let vars = map.labels();
    let hard_vars: Vec<String> = HARD.iter().map(|&i| vars[i].clone()).collect();
    let lower = m05_discriminant(&hard_vars).with_vars(&vars);
    let mut report = SoftLimitReport {
        m: 6,
        k: 5,
        weight: soft_limit_weight(6, 5)?,
        completed: false,
        raw_degree: None,
        spurious: Vec::new(),
        lower_factor: m05_discriminant(&hard_vars).to_text(),
        lower_multiplicity: 3,
        second_factor_degree: None,
        second_factor_bidegree: None,
        second_factor_terms: 0,
        second_factor: None,
        product_degree: None,
        product_homogeneous: false,
        divides_exactly: false,
        multiplicity_exact: false,
        zero_checks: 0,
        zero_checks_passed: 0,
        notes: Vec::new(),
    };
    match run(seed, &vars, &lower, &mut report, progress) {
        Ok(()) => report.completed = true,
        Err(e) => report.notes.push(format!("stopped: {e}")),
    }
    Ok(report)
}

pub fn soft_limit_m06(seed: u64) -> Result<SoftLimitReport> {
    soft_limit_m06_with(seed, &mut |_| {})
}

fn run(
    seed: u64,
    vars: &[String],
    lower: &Poly,
    report: &mut SoftLimitReport,
    progress: &mut dyn FnMut(&str),
) -> Result<()> {
    let mut rng = substream(seed, "softlimit");
    let f = Field::new(DISCOVERY_PRIME);
    let probe = BlackBox::new(&f, Vec::new(), &mut rng)
        .ok_or_else(|| Error::Numerical("degenerate probe point".into()))?;
    let (raw1, found1) = discover_spurious(&f, &probe, &mut rng)?;
    let (raw2, found2) = discover_spurious(&f, &probe, &mut rng)?;
    if raw1 != raw2 || found1 != found2 {
        return Err(Error::Numerical("spurious factors differ between lines".into()));
    }
    report.raw_degree = Some(raw1);
    report.spurious = found1
        .iter()
        .map(|&(mask, k)| SpuriousFactor { form: subset_sum(vars, mask).to_text(), multiplicity: k })
        .collect();
    progress(&format!("raw resultant degree {raw1}, {} spurious linear factors", found1.len()));

    let bb = BlackBox { disc_degree: probe.disc_degree, spurious: found1.clone() };
    let block_degree = |block: &[usize], rng: &mut Rng| -> Result<u32> {
        let a: Vec<Fe> = (0..9).map(|_| f.random_nonzero(rng)).collect();
        let mut b = vec![0; 9];
        for &i in block {
            b[i] = f.random_nonzero(rng);
        }
        let g = on_line(&f, &a, &b, |s| bb.stripped(&f, s), rng)
            .ok_or_else(|| Error::Numerical("unlucky block line".into()))?;
        if g.len() >= LINE_NODES / 2 {
            return Err(Error::Numerical("stripped resultant is not a polynomial of small degree".into()));
        }
        Ok(g.len() as u32 - 1)
    };
    let dh = block_degree(&HARD, &mut rng)?;
    let ds = block_degree(&SOFT, &mut rng)?;
    let total = raw1 - found1.iter().map(|&(_, k)| k).sum::<u32>();
    if dh + ds != total {
        return Err(Error::Numerical(format!("block degrees {dh} + {ds} do not add up to {total}")));
    }
    progress(&format!("second factor bidegree ({dh}, {ds})"));

    // dehomogenize at s13 = s15 = 1
    let free: Vec<usize> = HARD[1..].iter().chain(&SOFT[1..]).copied().collect();
    let set = LowerSet::product_of_simplices(&[(4, dh), (3, ds)]);
    progress(&format!("interpolating on {} points per prime", set.len()));
    let prepare = |f: &Field| {
        let mut r = substream(seed, "softlimit-prime");
        BlackBox::new(f, found1.clone(), &mut r)
    };
    let eval = |f: &Field, bb: &BlackBox, pt: &[Fe]| {
        let mut s = vec![f.one(); 9];
        for (&i, &v) in free.iter().zip(pt) {
            s[i] = v;
        }
        bb.stripped(f, &s)
    };
    let coeffs = interpolate_on(&set, dh.max(ds) as usize + 1, false, &prepare, &eval)?;
    let terms = set.exps.iter().zip(coeffs).map(|(e, c)| {
        let mut full = vec![0u32; 9];
        full[S13] = dh - e[..4].iter().sum::<u32>();
        full[S15] = ds - e[4..].iter().sum::<u32>();
        for (&i, &x) in free.iter().zip(e) {
            full[i] = x;
        }
        (full, c)
    });
    let second = Poly::from_terms(vars, terms).canonicalize()?;
    report.second_factor_degree = second.total_degree();
    report.second_factor_bidegree = Some((dh, ds));
    report.second_factor_terms = second.num_terms();
    progress(&format!("second factor: {} terms", second.num_terms()));

    let mut zrng = substream(seed, "softlimit-zeros");
    while report.zero_checks < 5 {
        if let Some(s) = degenerate_point(&mut zrng) {
            report.zero_checks += 1;
            if second.eval(&s)?.is_zero() {
                report.zero_checks_passed += 1;
            }
        }
    }

    let cube = lower.pow(3);
    let product = cube.mul(&second);
    report.product_degree = product.total_degree();
    report.product_homogeneous = product.is_homogeneous();
    let quotient = product.div_exact(&cube);
    report.divides_exactly = quotient.as_ref() == Some(&second);
    report.multiplicity_exact = report.divides_exactly && second.div_exact(lower).is_none();
    progress("product checked");
    report.second_factor = Some(second);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_matches_the_closed_form() {
        let f = Field::new(DISCOVERY_PRIME);
        let k = |v: i64| f.from_i64(v);
        // (x - 2)(x - 3) and x - 5: (5 - 2)(5 - 3) = 6
        let a = vec![k(6), k(-5), k(1)];
        let b = vec![k(-5), k(1)];
        assert_eq!(f.dec(upoly::resultant(&f, &a, &b)), 6);
        assert_eq!(f.dec(upoly::resultant(&f, &b, &a)), 6);
        assert_eq!(upoly::resultant(&f, &a, &[k(-2), k(1)]), 0);
    }

    #[test]
    fn degenerate_points_kill_the_raw_resultant() {
        let f = Field::new(DISCOVERY_PRIME);
        let mut rng = substream(3, "sl-test");
        let bb = BlackBox::new(&f, Vec::new(), &mut rng).unwrap();
        let mut checked = 0;
        while checked < 5 {
            let Some(s) = degenerate_point(&mut rng) else { continue };
            let pt: Vec<Fe> = s.iter().map(|x| f.from_rat(x).unwrap()).collect();
            assert_eq!(bb.raw(&f, &pt), Some(0));
            checked += 1;
        }
    }
}
