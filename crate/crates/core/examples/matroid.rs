use logdisc::arrangement::Arrangement;
use logdisc::discriminant::{discriminant, DiscMethod, ElimOptions};
use logdisc::moduli::m0m_arrangement;

fn main() {
    let cases = [("simplex 3", Arrangement::simplex(3)), ("M05", m0m_arrangement(5).unwrap().0), ("M06", m0m_arrangement(6).unwrap().0)];
    for (name, arr) in cases {
        println!(
            "{name}: chi = {}, regions {}, bounded {}, ML degree {}",
            arr.characteristic_polynomial().unwrap().to_text(),
            arr.regions().unwrap(),
            arr.bounded_regions().unwrap(),
            arr.ml_degree().unwrap()
        );
    }
    let r = discriminant(&Arrangement::simplex(3), DiscMethod::Auto, &ElimOptions::default()).unwrap();
    println!("simplex discriminant factors: {}", r.factors.len());
}
