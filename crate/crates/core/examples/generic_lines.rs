//! Discriminant of five generic lines in the plane.

use std::time::Instant;

use logdisc::arrangement::Arrangement;
use logdisc::discriminant::{logdisc_elim, ElimOptions};
use logdisc::rng::substream;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let arr = Arrangement::random_doubly_uniform(2, 5, &mut substream(seed, "lines"));
    for i in 0..5 {
        println!("l{i} = {}", arr.form(i).to_text());
    }
    let t = Instant::now();
    let r = logdisc_elim(&arr, &ElimOptions { seed, ..Default::default() }).expect("elimination");
    for f in &r.factors {
        println!("degree {:?}, {} terms, certified {}", f.poly.total_degree(), f.poly.num_terms(), f.certified);
    }
    println!("{:?}", r.notes);
    println!("{:.1}s", t.elapsed().as_secs_f64());
}
