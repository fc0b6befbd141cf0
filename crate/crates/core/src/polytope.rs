//! Newton polytopes, face enumeration and initial forms.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank};
use crate::poly::{Monomial, Poly};
use crate::rational::{subsets, Rat};

pub const MAX_AMBIENT: usize = 8;
pub const MAX_VERTICES: usize = 200;
pub const MAX_FACE_DIM: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    /// Inward primitive normal `w`; every point satisfies `w . a >= offset`.
    pub normal: Vec<i64>,
    pub offset: i64,
    /// Indices into `vertices`.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticePolytope {
    pub ambient_dim: usize,
    pub points: Vec<Vec<i64>>,
    pub vertices: Vec<Vec<i64>>,
    pub dim: usize,
    pub facets: Vec<Facet>,
}

fn dot(w: &[Rat], p: &[i64]) -> Rat {
    w.iter().zip(p).map(|(w, &p)| w * Rat::from_integer(p.into())).sum()
}

fn dot_i(w: &[i64], p: &[i64]) -> i64 {
    w.iter().zip(p).map(|(a, b)| a * b).sum()
}

fn diffs(pts: &[&Vec<i64>]) -> Vec<Vec<Rat>> {
    pts.iter().skip(1).map(|p| p.iter().zip(pts[0]).map(|(a, b)| Rat::from_integer((a - b).into())).collect()).collect()
}

fn affine_dim(pts: &[&Vec<i64>]) -> usize {
    if pts.len() <= 1 {
        0
    } else {
        rank(&diffs(pts))
    }
}

/// Lexicographic minimizer of `(w . p, r . p, p)`: always a vertex.
fn extreme_point(points: &[Vec<i64>], w: &[Rat], r: &[i64]) -> usize {
    (0..points.len())
        .min_by(|&i, &j| {
            let (a, b) = (&points[i], &points[j]);
            dot(w, a).cmp(&dot(w, b)).then(dot_i(r, a).cmp(&dot_i(r, b))).then(a.cmp(b))
        })
        .expect("nonempty point set")
}

/// Primitive integer vector proportional to `v`.
fn primitive(v: &[Rat]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

fn to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| Error::SizeCap("facet normal exceeds 64 bits".into()))).collect()
}

struct Hull {
    dim: usize,
    facets: Vec<(Vec<Rat>, Rat, Vec<usize>)>,
}

/// Facets of `conv(verts)` by brute force over `dim`-subsets, with normals
/// restricted to the direction space of the affine hull.
fn hull_facets(verts: &[Vec<i64>]) -> Hull {
    let refs: Vec<&Vec<i64>> = verts.iter().collect();
    let dim = affine_dim(&refs);
    if dim == 0 {
        return Hull { dim, facets: vec![] };
    }
    let n = verts[0].len();
    let perp = nullspace(&diffs(&refs), n);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut facets = Vec::new();
    for s in subsets(verts.len(), dim) {
        let pts: Vec<&Vec<i64>> = s.iter().map(|&i| &verts[i]).collect();
        let mut rows = diffs(&pts);
        rows.extend(perp.iter().cloned());
        let ker = nullspace(&rows, n);
        if ker.len() != 1 {
            continue;
        }
        let mut w = ker.into_iter().next().unwrap();
        let off = dot(&w, pts[0]);
        let vals: Vec<Rat> = verts.iter().map(|p| dot(&w, p) - &off).collect();
        let neg = vals.iter().any(|v| v.is_negative());
        let pos = vals.iter().any(|v| v.is_positive());
        if neg && pos {
            continue;
        }
        if neg {
            w = w.iter().map(|x| -x).collect();
        }
        let on: Vec<usize> = (0..verts.len()).filter(|&i| vals[i].is_zero()).collect();
        if seen.insert(on.clone()) {
            let off = dot(&w, pts[0]);
            facets.push((w, off, on));
        }
    }
    Hull { dim, facets }
}

/// Exact Newton polytope of a nonzero polynomial.
pub fn newton_polytope(f: &Poly) -> Result<LatticePolytope> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.nvars();
    if n > MAX_AMBIENT {
        return Err(Error::SizeCap(format!("ambient dimension {n} exceeds {MAX_AMBIENT}")));
    }
    let points: Vec<Vec<i64>> = f.terms().map(|(m, _)| m.0.iter().map(|&e| e as i64).collect()).collect::<BTreeSet<_>>().into_iter().collect();
    let homogeneous = f.is_homogeneous();

    let mut found: BTreeSet<usize> = BTreeSet::new();
    let zero = vec![Rat::zero(); n];
    let tie: Vec<i64> = (0..n as i64).map(|i| 7919 * i * i + 104_729 * i + 1).collect();
    found.insert(extreme_point(&points, &zero, &tie));
    for i in 0..n {
        for sign in [1i64, -1] {
            let mut w = zero.clone();
            w[i] = Rat::from_integer(sign.into());
            found.insert(extreme_point(&points, &w, &tie));
        }
    }
    let hull = loop {
        if found.len() > MAX_VERTICES {
            return Err(Error::SizeCap(format!("more than {MAX_VERTICES} vertices")));
        }
        let verts: Vec<Vec<i64>> = found.iter().map(|&i| points[i].clone()).collect();
        let hull = hull_facets(&verts);
        let mut grew = false;
        for (w, off, _) in &hull.facets {
            if points.iter().any(|p| dot(w, p) < *off) {
                grew |= found.insert(extreme_point(&points, w, &tie));
            }
        }
        if hull.dim < affine_dim(&points.iter().collect::<Vec<_>>()) {
            let refs: Vec<&Vec<i64>> = verts.iter().collect();
            for w in nullspace(&diffs(&refs), n) {
                for s in [1, -1] {
                    let w: Vec<Rat> = w.iter().map(|x| x * Rat::from_integer(s.into())).collect();
                    grew |= found.insert(extreme_point(&points, &w, &tie));
                }
            }
        }
        if !grew {
            break hull;
        }
    };
    let vertices: Vec<Vec<i64>> = found.iter().map(|&i| points[i].clone()).collect();
    let mut facets = Vec::with_capacity(hull.facets.len());
    for (w, _, on) in hull.facets {
        let mut normal = primitive(&w);
        if homogeneous {
            let min = normal.iter().min().cloned().unwrap_or_default();
            let shifted: Vec<Rat> = normal.iter().map(|x| Rat::from_integer(x - &min)).collect();
            normal = primitive(&shifted);
        }
        let normal = to_i64(&normal)?;
        let offset = points.iter().map(|p| dot_i(&normal, p)).min().unwrap_or(0);
        facets.push(Facet { normal, offset, vertices: on });
    }
    facets.sort_by(|a, b| a.normal.cmp(&b.normal));
    Ok(LatticePolytope { ambient_dim: n, points, dim: hull.dim, vertices, facets })
}

impl LatticePolytope {
    /// Inward primitive facet normals (min entry 0 for homogeneous input).
    pub fn facet_normals(&self) -> Result<Vec<Vec<i64>>> {
        if self.dim > MAX_FACE_DIM {
            return Err(Error::SizeCap(format!("dimension {} exceeds {MAX_FACE_DIM}", self.dim)));
        }
        Ok(self.facets.iter().map(|f| f.normal.clone()).collect())
    }

    /// Face counts `(f_0, ..., f_{dim-1})` from vertex-facet incidences.
    pub fn f_vector(&self) -> Result<Vec<usize>> {
        if self.dim > MAX_FACE_DIM {
            return Err(Error::SizeCap(format!("dimension {} exceeds {MAX_FACE_DIM}", self.dim)));
        }
        if self.dim == 0 {
            return Ok(vec![]);
        }
        let facets: Vec<BTreeSet<usize>> = self.facets.iter().map(|f| f.vertices.iter().copied().collect()).collect();
        let mut faces: HashSet<BTreeSet<usize>> = facets.iter().cloned().collect();
        let mut frontier: Vec<BTreeSet<usize>> = facets.clone();
        while let Some(face) = frontier.pop() {
            for g in &facets {
                let meet: BTreeSet<usize> = face.intersection(g).copied().collect();
                if !meet.is_empty() && faces.insert(meet.clone()) {
                    frontier.push(meet);
                }
            }
        }
        let mut fv = vec![0; self.dim];
        for face in &faces {
            let pts: Vec<&Vec<i64>> = face.iter().map(|&i| &self.vertices[i]).collect();
            let k = affine_dim(&pts);
            if k < self.dim {
                fv[k] += 1;
            }
        }
        Ok(fv)
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.facets.iter().all(|f| dot_i(&f.normal, p) >= f.offset)
    }
}

/// Terms of `f` whose exponents minimize `w . alpha`.
pub fn initial_form(f: &Poly, w: &[Rat]) -> Result<Poly> {
    if w.len() != f.nvars() {
        return Err(Error::Arity { expected: f.nvars(), got: w.len() });
    }
    let weight = |m: &Monomial| -> Rat { w.iter().zip(&m.0).map(|(w, &e)| w * Rat::from_integer(e.into())).sum() };
    let Some(min) = f.terms().map(|(m, _)| weight(m)).min() else { return Ok(f.clone()) };
    Ok(Poly::from_terms(f.vars(), f.terms().filter(|(m, _)| weight(m) == min).map(|(m, c)| (m.0.clone(), c.clone()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::m05_discriminant;
    use crate::poly::{parse_expr, var_names};
    use crate::rational::rat;
    use crate::rng::substream;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn m05_polytope() {
        let f = m05_discriminant(&var_names("u", 5));
        let p = newton_polytope(&f).unwrap();
        assert_eq!(p.dim, 4);
        assert_eq!(p.f_vector().unwrap(), vec![7, 17, 18, 8]);
        let got: BTreeSet<Vec<i64>> = p.facet_normals().unwrap().into_iter().collect();
        let want: BTreeSet<Vec<i64>> = [
            [1, 0, 1, 0, 1],
            [0, 1, 0, 1, 1],
            [0, 0, 1, 1, 1],
            [1, 1, 0, 0, 1],
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
        ]
        .iter()
        .map(|v| v.to_vec())
        .collect();
        assert_eq!(got, want);
        for w in &want {
            let wr: Vec<Rat> = w.iter().map(|&x| rat(x)).collect();
            assert!(initial_form(&f, &wr).unwrap().num_terms() < f.num_terms());
        }
    }

    #[test]
    fn small_polytopes() {
        let v = var_names("u", 4);
        let point = newton_polytope(&parse_expr(&v, "3*u0*u1^2").unwrap()).unwrap();
        assert_eq!(point.dim, 0);
        assert_eq!(point.vertices.len(), 1);
        let seg = newton_polytope(&parse_expr(&v, "u0+u1").unwrap()).unwrap();
        assert_eq!(seg.dim, 1);
        assert_eq!(seg.vertices, vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0]]);
        assert_eq!(seg.facet_normals().unwrap().len(), 2);
        assert_eq!(seg.f_vector().unwrap(), vec![2]);
        let simplex = newton_polytope(&parse_expr(&v, "u0+u1+u2+u3").unwrap()).unwrap();
        assert_eq!(simplex.f_vector().unwrap(), vec![4, 6, 4]);
        let mut normals = simplex.facet_normals().unwrap();
        normals.sort();
        assert_eq!(normals, vec![vec![0, 0, 0, 1], vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![1, 0, 0, 0]]);
        let w = var_names("x", 2);
        let square = newton_polytope(&parse_expr(&w, "1+x0+x1+x0*x1").unwrap()).unwrap();
        assert_eq!(square.f_vector().unwrap(), vec![4, 4]);
    }

    #[test]
    fn interior_points_are_not_vertices() {
        let v = var_names("x", 2);
        let f = parse_expr(&v, "1 + x0^2 + x1^2 + x0*x1 + x0 + x1").unwrap();
        let p = newton_polytope(&f).unwrap();
        assert_eq!(p.vertices.len(), 3);
        assert!(p.points.iter().all(|q| p.contains(q)));
    }

    #[test]
    fn initial_forms() {
        let f = m05_discriminant(&var_names("u", 5));
        assert_eq!(initial_form(&f, &vec![rat(0); 5]).unwrap(), f);
        let v = var_names("u", 2);
        let g = parse_expr(&v, "u0^2 + 3*u0*u1 - u1^2").unwrap();
        assert_eq!(initial_form(&g, &[rat(0), rat(1)]).unwrap(), parse_expr(&v, "u0^2").unwrap());
    }

    fn random_poly(rng: &mut crate::rng::Rng, vars: &[String], terms: usize, deg: u32) -> Poly {
        let mut f = Poly::zero(vars);
        for _ in 0..terms {
            let e: Vec<u32> = (0..vars.len()).map(|_| rng.gen_range(0..=deg)).collect();
            f = f.add(&Poly::monomial(vars, e, rat(rng.gen_range(1..9))));
        }
        f
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn initial_form_laws(seed in 0u64..10_000) {
            let mut rng = substream(seed, "initial");
            let v = var_names("u", 3);
            let f = random_poly(&mut rng, &v, 5, 3);
            let g = random_poly(&mut rng, &v, 4, 2);
            let w: Vec<Rat> = (0..3).map(|_| rat(rng.gen_range(-3..4))).collect();
            let fw = initial_form(&f, &w).unwrap();
            prop_assert_eq!(initial_form(&fw, &w).unwrap(), fw.clone());
            prop_assert_eq!(initial_form(&f.mul(&g), &w).unwrap(), fw.mul(&initial_form(&g, &w).unwrap()));
        }

        #[test]
        fn minkowski_and_euler(seed in 0u64..10_000) {
            let mut rng = substream(seed, "minkowski");
            let v = var_names("u", 3);
            let f = random_poly(&mut rng, &v, 4, 2);
            let g = random_poly(&mut rng, &v, 3, 2);
            let pf = newton_polytope(&f).unwrap();
            let pg = newton_polytope(&g).unwrap();
            let pfg = newton_polytope(&f.mul(&g)).unwrap();
            let sums: BTreeSet<Vec<i64>> = pf.vertices.iter()
                .flat_map(|a| pg.vertices.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()))
                .collect();
            let sum_poly = Poly::from_terms(&v, sums.iter().map(|e| (e.iter().map(|&x| x as u32).collect(), rat(1))));
            prop_assert_eq!(newton_polytope(&sum_poly).unwrap().vertices, pfg.vertices.clone());
            let fv = pfg.f_vector().unwrap();
            let alt: i64 = fv.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
            let d = pfg.dim as u32;
            prop_assert_eq!(alt, 1 - (-1i64).pow(d));
            prop_assert!(pfg.points.iter().all(|p| pfg.contains(p)));
        }
    }
}
