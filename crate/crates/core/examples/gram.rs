use logdisc::moduli::gram_minor_check;
use logdisc::rational::{parse_rat, Rat};

// cargo run --example gram -- -1/2 1 2 -1/2 -1
fn main() {
    let mut u: Vec<Rat> = std::env::args().skip(1).map(|s| parse_rat(&s).expect("rational")).collect();
    if u.is_empty() {
        u = ["-1/2", "1", "2", "-1/2", "-1"].iter().map(|s| parse_rat(s).unwrap()).collect();
    }
    let r = gram_minor_check(&u).expect("five entries");
    for row in &r.gram {
        println!("{}", row.join("\t"));
    }
    println!("minors {:?}\ndelta {} equal {}", r.minors, r.delta, r.all_equal);
}
