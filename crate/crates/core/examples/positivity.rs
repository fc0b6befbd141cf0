use logdisc::critical::{membership_numeric, to_complex, varchenko_check, Tolerances};
use logdisc::moduli::m0m_arrangement;
use logdisc::rational::ratio;

fn main() {
    let (arr, _) = m0m_arrangement(5).expect("M05");
    let u = vec![ratio(1, 2), ratio(3, 1), ratio(5, 7), ratio(2, 1), ratio(9, 4)];
    let tol = Tolerances::default();
    let v = varchenko_check(&arr, &u, 0, &tol).expect("check");
    println!("{}", serde_json::to_string_pretty(&serde_json::json!({
        "pass": v.pass, "found": v.found, "real": v.real, "max_imag": v.max_imag,
        "min_relative_hessdet": v.min_relative_hessdet, "points": v.points,
    })).unwrap());
    let m = membership_numeric(&arr, &to_complex(&u), 0, &tol).expect("membership");
    println!("membership: {} ({})", m.verdict, m.reason);
}
