use logdisc::discriminant::{d1_disc_route, d1_res_route};
use logdisc::rational::{parse_rat, Rat};

// cargo run --example points_on_line -- 0 -1 -2 5/3
fn main() {
    let mut points: Vec<Rat> = std::env::args().skip(1).map(|s| parse_rat(&s).expect("rational")).collect();
    if points.is_empty() {
        points = ["0", "-1", "-2"].iter().map(|s| parse_rat(s).unwrap()).collect();
    }
    let disc = d1_disc_route(&points).expect("discriminant route");
    let (res, mult) = d1_res_route(&points).expect("resultant route");
    println!("degree {:?}, {} terms", disc.total_degree(), disc.num_terms());
    println!("{}", disc.to_text());
    println!("routes agree: {}, stripped multiplicities {mult:?}", disc == res);
}
