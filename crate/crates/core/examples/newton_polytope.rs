use logdisc::moduli::{m05_discriminant, MandelstamMap};
use logdisc::polytope::{initial_form, newton_polytope};
use logdisc::rational::rat;

fn main() {
    let labels = MandelstamMap::new(5).expect("labels").labels();
    let delta = m05_discriminant(&labels);
    let p = newton_polytope(&delta).expect("polytope");
    println!("f-vector {:?}", p.f_vector().unwrap());
    for n in p.facet_normals().unwrap() {
        let w: Vec<_> = n.iter().map(|&v| rat(v)).collect();
        println!("{n:?}: {}", initial_form(&delta, &w).unwrap().to_text());
    }
}
