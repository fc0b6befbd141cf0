use logdisc::discriminant::{discriminant, DiscMethod, ElimOptions};
use logdisc::moduli::m0m_arrangement;
use logdisc::rational::{format_rat, ratio, rat};

fn main() {
    let (arr, _) = m0m_arrangement(5).expect("M05");
    let r = discriminant(&arr, DiscMethod::Auto, &ElimOptions::default()).expect("discriminant");
    for f in &r.factors {
        println!("{} (certified {})", f.poly.to_text(), f.certified);
    }
    let at = [ratio(-1, 2), rat(1), rat(2), ratio(-1, 2), rat(-1)];
    println!("value at {:?}: {}", at.iter().map(format_rat).collect::<Vec<_>>(), format_rat(&r.factors[0].poly.eval(&at).unwrap()));
}
