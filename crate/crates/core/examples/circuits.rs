use logdisc::arrangement::Arrangement;
use logdisc::rational::{format_rat, rat};
use logdisc::reciprocal::{circuit_generators, reciprocal_point};
use logdisc::rng::substream;

fn main() {
    let arr = Arrangement::random_doubly_uniform(2, 5, &mut substream(1, "circuits"));
    for l in arr.forms() {
        println!("l = {}", l.to_text());
    }
    let report = circuit_generators(&arr).expect("circuits");
    for g in &report.generators {
        println!("{:?}: {}", g.support, g.poly.to_text());
    }
    let y = reciprocal_point(&arr, &[rat(3), rat(-5)]).expect("point off the arrangement");
    let values: Vec<String> = report.generators.iter().map(|g| format_rat(&g.poly.eval(&y).unwrap())).collect();
    println!("at 1/l(3,-5): {values:?}");
}
