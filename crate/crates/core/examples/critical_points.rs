use logdisc::critical::{solve_critical, to_complex, Tolerances};
use logdisc::moduli::m0m_arrangement;
use logdisc::rational::{rat, Rat};

fn main() {
    let (arr, map) = m0m_arrangement(6).expect("M06");
    let u: Vec<Rat> = [3, -7, 2, 5, 11, -4, 6, 13, -9].iter().map(|&v| rat(v)).collect();
    let s = solve_critical(&arr, &to_complex(&u), 0, &Tolerances::default()).expect("solve");
    println!("labels {:?}", map.labels());
    println!("{} of {} expected, status {}", s.certified(), s.count_expected, s.solve_status());
    for (p, r) in s.points.iter().zip(&s.residuals) {
        let coords: Vec<String> = p.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
        println!("  [{}]  residual {r:.1e}", coords.join(", "));
    }
}
