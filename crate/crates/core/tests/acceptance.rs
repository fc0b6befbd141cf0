//! Acceptance suite: one PASS/FAIL line per criterion. Criterion 13 is a
//! stretch goal and does not affect the exit status.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::Rng as _;

use logdisc::arrangement::Arrangement;
use logdisc::critical::{membership_numeric, solve_critical, to_complex, varchenko_check, Membership, Tolerances};
use logdisc::discriminant::{d1_disc_route, d1_res_route, discriminant, logdisc_d1, DiscMethod, ElimOptions};
use logdisc::moduli::{gram_minor_check, m0m_arrangement, soft_limit_m06};
use logdisc::poly::{parse_expr, var_names, Poly, PolyDoc};
use logdisc::polytope::{initial_form, newton_polytope};
use logdisc::rational::{rat, ratio, Rat};
use logdisc::reciprocal::{circuit_generators, reciprocal_point};
use logdisc::rng::{substream, Rng};

type Verdict = Result<String, String>;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn load(name: &str) -> Arrangement {
    Arrangement::from_json_str(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: &Instant, limit: f64) -> Result<(), String> {
    let s = t.elapsed().as_secs_f64();
    ensure(s < limit, format!("took {s:.1}s, limit {limit}s"))
}

/// Wide-range rationals, so that no subset sum vanishes in practice.
fn generic_u(rng: &mut Rng, len: usize) -> Vec<Rat> {
    (0..len).map(|_| ratio(rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(1..=997))).collect()
}

fn rand_rat(rng: &mut Rng, lo: i64, hi: i64) -> Rat {
    loop {
        let r = ratio(rng.gen_range(lo..=hi), rng.gen_range(1..=9));
        if !r.is_zero() {
            return r;
        }
    }
}

/// Displayed closed form of the M_{0,5} discriminant in `u0..u4`.
fn m05_display(vars: &[String]) -> Poly {
    let u = var_names("u", 5);
    let q = parse_expr(&u, "u0*u3 + u0*u4 + u1*u4 + u1*u2 + u2*u4 + u3*u4 + u4^2").unwrap();
    let m = parse_expr(&u, "4*u0*u1*u2*u3").unwrap();
    q.mul(&q).sub(&m).rename(vars)
}

fn c1() -> Verdict {
    let t = Instant::now();
    let out = std::env::temp_dir().join(format!("logdisc-acceptance-{}.json", std::process::id()));
    let code = logdisc::cli::run(["logdisc", "disc", data("m05.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    within(&t, 10.0)?;
    ensure(code == 0, format!("exit code {code}"))?;
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let _ = std::fs::remove_file(&out);
    let factors = report["outputs"]["factors"].as_array().unwrap();
    ensure(factors.len() == 1, format!("{} factors", factors.len()))?;
    ensure(factors[0]["certified"] == true, "factor not certified")?;
    let doc: PolyDoc = serde_json::from_value(factors[0]["poly"].clone()).unwrap();
    let got = doc.to_poly().unwrap();
    let want = m05_display(got.vars()).canonicalize().unwrap();
    ensure(got == want, format!("got {}", got.to_text()))?;
    ensure(got.total_degree() == Some(4), "degree")?;
    Ok(format!("quartic with {} terms, {:.2}s", got.num_terms(), t.elapsed().as_secs_f64()))
}

fn c2() -> Verdict {
    let t = Instant::now();
    let arr = load("ex33.json");
    let r = discriminant(&arr, DiscMethod::Auto, &ElimOptions::default()).map_err(|e| e.to_string())?;
    within(&t, 60.0)?;
    let v = arr.u_vars();
    let q1 = parse_expr(&v, "144*u0^2+120*u0*u1+168*u0*u2+25*u1^2-70*u1*u2+49*u2^2").unwrap();
    let q2 = parse_expr(&v, "u3^2-2*u3*u4+4*u3*u5+u4^2+4*u4*u5+4*u5^2").unwrap();
    let got: Vec<&Poly> = r.factors.iter().map(|f| &f.poly).collect();
    ensure(got.len() == 2 && got.contains(&&q1) && got.contains(&&q2), format!("factors {:?}", got.iter().map(|p| p.to_text()).collect::<Vec<_>>()))?;
    ensure(r.factors.iter().all(|f| f.certified), "uncertified factor")?;
    let flagged = r.leftover.iter().map(|l| l.note.clone()).collect::<Vec<_>>().join("; ");
    Ok(format!("two quadrics, leftover: [{flagged}], {:.1}s", t.elapsed().as_secs_f64()))
}

fn c3() -> Verdict {
    let mut rng = substream(3, "acceptance-d1");
    let mut worst: f64 = 0.0;
    for n1 in 3..=7usize {
        for _ in 0..10 {
            let mut pts: Vec<Rat> = Vec::new();
            while pts.len() < n1 {
                let p = rand_rat(&mut rng, -50, 50);
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            let t = Instant::now();
            let r = logdisc_d1(&pts).map_err(|e| e.to_string())?;
            let n = n1 as u32 - 1;
            ensure(r.factors.len() == 1 && r.factors[0].poly.total_degree() == Some(2 * (n - 1)), format!("degree at n+1 = {n1}"))?;
            let disc = d1_disc_route(&pts).map_err(|e| e.to_string())?;
            let (res, mult) = d1_res_route(&pts).map_err(|e| e.to_string())?;
            ensure(disc == res, format!("routes differ at {pts:?}"))?;
            ensure(mult.len() == n1 + 1 && mult.iter().all(|&k| k == 1), format!("stripped {mult:?}"))?;
            within(&t, 30.0)?;
            worst = worst.max(t.elapsed().as_secs_f64());
        }
    }
    Ok(format!("50 instances, slowest {worst:.2}s"))
}

fn c4() -> Verdict {
    let arr = load("three_points.json");
    let r = discriminant(&arr, DiscMethod::Auto, &ElimOptions::default()).map_err(|e| e.to_string())?;
    let v = arr.u_vars();
    // b = 2 in the displayed family
    let want = parse_expr(&v, "u0^2 + 4*u0*u1 + 4*u1^2 - 2*u0*u2 + 4*u1*u2 + u2^2").unwrap();
    ensure(r.factors.len() == 1 && r.factors[0].poly == want, format!("got {:?}", r.factors.first().map(|f| f.poly.to_text())))?;
    let c = |e: [u32; 3]| want.coeff(&e);
    let half = ratio(1, 2);
    let m = [
        [c([2, 0, 0]), c([1, 1, 0]) * &half, c([1, 0, 1]) * &half],
        [c([1, 1, 0]) * &half, c([0, 2, 0]), c([0, 1, 1]) * &half],
        [c([1, 0, 1]) * &half, c([0, 1, 1]) * &half, c([0, 0, 2])],
    ];
    let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    ensure(det == rat(-16), format!("ternary discriminant {det}"))?;
    Ok("quadric matches, discriminant -16".into())
}

fn c5() -> Verdict {
    let mut notes = Vec::new();
    for (n1, want, limit) in [(4usize, 4u32, 300.0), (5, 12, 300.0)] {
        let arr = Arrangement::random_doubly_uniform(2, n1, &mut substream(5, "acceptance-generic"));
        let t = Instant::now();
        let r = discriminant(&arr, DiscMethod::Auto, &ElimOptions::default()).map_err(|e| e.to_string())?;
        within(&t, limit)?;
        ensure(r.total_degree == want, format!("(2,{}) degree {} != {want}", n1 - 1, r.total_degree))?;
        ensure(!r.factors.is_empty() && r.factors.iter().all(|f| f.certified), format!("(2,{}) not certified", n1 - 1))?;
        notes.push(format!("(2,{}) degree {want} in {:.1}s", n1 - 1, t.elapsed().as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn c6() -> Verdict {
    let tol = Tolerances::default();
    let mut rng = substream(6, "acceptance-crit");
    let generic = Arrangement::random_doubly_uniform(2, 5, &mut substream(6, "acceptance-crit-arr"));
    let batches: Vec<(&str, Arrangement, usize)> = vec![
        ("M05", m0m_arrangement(5).unwrap().0, 2),
        ("M06", m0m_arrangement(6).unwrap().0, 6),
        ("simplex3", Arrangement::simplex(3), 1),
        ("generic(2,4)", generic, 6),
    ];
    let mut notes = Vec::new();
    for (name, arr, want) in batches {
        let t = Instant::now();
        let mut worst: f64 = 0.0;
        for k in 0..20u64 {
            let u = generic_u(&mut rng, arr.n_plus_1());
            let s = solve_critical(&arr, &to_complex(&u), k, &tol).map_err(|e| e.to_string())?;
            ensure(s.certified() == want, format!("{name}: {} points for u = {u:?}", s.certified()))?;
            worst = s.residuals.iter().fold(worst, |m, &r| m.max(r));
        }
        within(&t, 30.0)?;
        ensure(worst < 1e-10, format!("{name}: residual {worst:e}"))?;
        notes.push(format!("{name} {want} ({:.1}s)", t.elapsed().as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn c7() -> Verdict {
    let (arr, _) = m0m_arrangement(5).unwrap();
    let tol = Tolerances::default();
    let mut rng = substream(7, "acceptance-varchenko");
    let mut max_imag: f64 = 0.0;
    for k in 0..100u64 {
        let u: Vec<Rat> = (0..5).map(|_| rand_rat(&mut rng, 1, 40)).collect();
        let v = varchenko_check(&arr, &u, k, &tol).map_err(|e| e.to_string())?;
        ensure(v.pass && v.found == 2 && v.real == 2, format!("u = {u:?}: {v:?}"))?;
        ensure(v.max_imag < 1e-10, format!("imaginary part {:e}", v.max_imag))?;
        let m = membership_numeric(&arr, &to_complex(&u), k, &tol).map_err(|e| e.to_string())?;
        ensure(m.verdict == Membership::Outside, format!("verdict {} at {u:?}", m.verdict))?;
        max_imag = max_imag.max(v.max_imag);
    }
    let r = discriminant(&arr, DiscMethod::Auto, &ElimOptions::default()).map_err(|e| e.to_string())?;
    let w = r.factors[0].poly.eval(&[ratio(-1, 2), rat(1), rat(2), ratio(-1, 2), rat(-1)]).unwrap();
    ensure(w == ratio(-7, 16), format!("witness value {w}"))?;
    Ok(format!("100 positive u, max |imag| {max_imag:.1e}, witness -7/16"))
}

fn c8() -> Verdict {
    let (arr, _) = m0m_arrangement(5).unwrap();
    let delta = m05_display(&arr.u_vars());
    let t = Instant::now();
    let p = newton_polytope(&delta).map_err(|e| e.to_string())?;
    let fv = p.f_vector().map_err(|e| e.to_string())?;
    let mut normals = p.facet_normals().map_err(|e| e.to_string())?;
    within(&t, 10.0)?;
    ensure(fv == vec![7, 17, 18, 8], format!("f-vector {fv:?}"))?;
    let mut want: Vec<Vec<i64>> = vec![
        vec![1, 0, 1, 0, 1],
        vec![0, 1, 0, 1, 1],
        vec![0, 0, 1, 1, 1],
        vec![1, 1, 0, 0, 1],
        vec![1, 0, 0, 0, 0],
        vec![0, 1, 0, 0, 0],
        vec![0, 0, 1, 0, 0],
        vec![0, 0, 0, 1, 0],
    ];
    want.sort();
    normals.sort();
    ensure(normals == want, format!("normals {normals:?}"))?;
    Ok(format!("f-vector (7,17,18,8), 8 normals, {:.3}s", t.elapsed().as_secs_f64()))
}

fn c9() -> Verdict {
    let (arr, map) = m0m_arrangement(5).unwrap();
    let s = map.labels();
    let delta = m05_display(&s);
    let w: Vec<Rat> = [0, 1, 0, 1, 1].iter().map(|&x| rat(x)).collect();
    let got = initial_form(&delta, &w).map_err(|e| e.to_string())?;
    // soft-limit equations: s13/x1 + s23/(x1 - 1) = 0 fixes x1 = s13/(s13 + s23);
    // the discriminant in x2 of the cleared second equation
    let p = |e: &str| parse_expr(&s, e).unwrap();
    let (s14, s24, s34) = (p("s14"), p("s24"), p("s34"));
    let den = p("s13 + s23");
    let x1n = p("s13");
    // (s13 + s23) * [s14 (x2 - 1)(x2 - x1) + s24 x2 (x2 - x1) + s34 x2 (x2 - 1)]
    let a = s14.add(&s24).add(&s34).mul(&den);
    let b = s14.mul(&den.add(&x1n)).add(&s24.mul(&x1n)).add(&s34.mul(&den)).neg();
    let c = s14.mul(&x1n);
    let oracle = b.mul(&b).sub(&a.mul(&c).scale(&rat(4)));
    ensure(got.canonicalize().unwrap() == oracle.canonicalize().unwrap(), format!("initial form {}", got.to_text()))?;
    let printed = {
        let q = p("s13*s24 + s13*s34 + s14*s34 + s23*s34");
        q.mul(&q).sub(&p("4*s13*s14*s23*s24"))
    };
    let corrected = {
        let q = p("s13*s24 + s13*s34 + s14*s23 + s23*s34");
        q.mul(&q).sub(&p("4*s13*s14*s23*s24"))
    };
    ensure(got == corrected, "initial form differs from the corrected display")?;
    let _ = arr;
    Ok(format!(
        "equals the soft-limit discriminant; the displayed square has s14*s34 where the w-minimal term is s14*s23 (display literally equal: {})",
        got == printed
    ))
}

fn c10() -> Verdict {
    let mut rng = substream(10, "acceptance-gram");
    let vars = var_names("u", 5);
    let delta = m05_display(&vars);
    for _ in 0..100 {
        let u: Vec<Rat> = (0..5).map(|_| rand_rat(&mut rng, -30, 30)).collect();
        let r = gram_minor_check(&u).map_err(|e| e.to_string())?;
        let want = logdisc::rational::format_rat(&delta.eval(&u).unwrap());
        ensure(r.all_equal && r.minors.iter().all(|m| *m == want), format!("u = {u:?}"))?;
    }
    Ok("100 random u".into())
}

fn c11() -> Verdict {
    let tol = Tolerances::default();
    let mut rng = substream(11, "acceptance-simplex");
    for d in 2..=4 {
        let arr = Arrangement::simplex(d);
        let r = discriminant(&arr, DiscMethod::Auto, &ElimOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.factors.is_empty(), format!("d = {d}: {} factors", r.factors.len()))?;
        for k in 0..5 {
            let u = generic_u(&mut rng, d + 1);
            let s = solve_critical(&arr, &to_complex(&u), k, &tol).map_err(|e| e.to_string())?;
            ensure(s.certified() == 1 && s.points.len() == 1, format!("d = {d}: {} points", s.points.len()))?;
        }
    }
    Ok("d = 2, 3, 4 empty with one critical point".into())
}

fn c12() -> Verdict {
    let mut rng = substream(12, "acceptance-circuits");
    let mut count = 0;
    for (d, n1) in [(1usize, 4usize), (2, 5)] {
        for _ in 0..5 {
            let arr = Arrangement::random_doubly_uniform(d, n1, &mut rng);
            let gens = circuit_generators(&arr).map_err(|e| e.to_string())?.generators;
            ensure(!gens.is_empty(), "no generators")?;
            let mut pts = 0;
            while pts < 50 {
                let x: Vec<Rat> = (0..d).map(|_| rand_rat(&mut rng, -40, 40)).collect();
                let Ok(y) = reciprocal_point(&arr, &x) else { continue };
                for g in &gens {
                    ensure(g.poly.eval(&y).unwrap().is_zero(), format!("generator {:?} nonzero", g.support))?;
                }
                pts += 1;
                count += gens.len();
            }
        }
    }
    Ok(format!("{count} exact evaluations vanish"))
}

fn c13() -> Verdict {
    let t = Instant::now();
    let r = soft_limit_m06(0).map_err(|e| e.to_string())?;
    within(&t, 1800.0)?;
    ensure(r.completed, format!("incomplete: {:?}", r.notes))?;
    ensure(r.second_factor_degree == Some(18), format!("second factor degree {:?}", r.second_factor_degree))?;
    ensure(r.divides_exactly && r.multiplicity_exact, "division by the cubed lower factor")?;
    ensure(r.product_degree == Some(30) && r.product_homogeneous, format!("product degree {:?}", r.product_degree))?;
    ensure(r.zero_checks > 0 && r.zero_checks_passed == r.zero_checks, "zero checks")?;
    Ok(format!(
        "degree 18 ({} terms) times cube of the M05 factor, degree 30, {:.0}s",
        r.second_factor_terms,
        t.elapsed().as_secs_f64()
    ))
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Verdict, bool)> = vec![
        (1, "M05 discriminant", c1, true),
        (2, "reducible example in dimension 3", c2, true),
        (3, "degree law on the line", c3, true),
        (4, "three points golden quadric", c4, true),
        (5, "generic degree law", c5, true),
        (6, "critical point counts", c6, true),
        (7, "positivity", c7, true),
        (8, "Newton polytope", c8, true),
        (9, "soft limit initial form", c9, true),
        (10, "Gram identity", c10, true),
        (11, "simplex emptiness", c11, true),
        (12, "circuit ideal", c12, true),
        (13, "m = 6 soft limit (stretch)", c13, false),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (id, name, f, blocking) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let t = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match verdict {
            Ok(msg) => println!("criterion {id:>2} PASS  {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                println!("criterion {id:>2} FAIL  {name}: {msg} [{secs:.1}s]{}", if blocking { "" } else { " (non-blocking)" });
                if blocking {
                    failed += 1;
                }
            }
        }
    }
    if failed > 0 {
        println!("{failed} blocking criteria failed");
        std::process::exit(1);
    }
    let _ = Rat::one();
}
