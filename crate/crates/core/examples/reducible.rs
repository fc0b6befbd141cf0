use logdisc::arrangement::Arrangement;
use logdisc::discriminant::{discriminant, DiscMethod, ElimOptions};

const DOC: &str = r#"{
  "d": 3,
  "b": ["1", "2", "1", "0", "0", "0"],
  "A": [["1", "1", "0"], ["1", "3/2", "0"], ["2", "3/2", "0"], ["1", "0", "1"], ["0", "1", "1"], ["1", "1", "2"]]
}"#;

fn main() {
    let arr = Arrangement::from_json_str(DOC).expect("arrangement");
    let r = discriminant(&arr, DiscMethod::Auto, &ElimOptions::default()).expect("discriminant");
    for f in &r.factors {
        println!("{}  certified {}", f.poly.to_text(), f.certified);
    }
    for l in &r.leftover {
        println!("leftover: {}", l.note);
    }
    for n in &r.notes {
        println!("note: {n}");
    }
}
