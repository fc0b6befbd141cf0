use logdisc::moduli::soft_limit_m06_with;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let r = soft_limit_m06_with(seed, &mut |line| eprintln!("{line}")).expect("soft limit");
    println!("{}", serde_json::to_string_pretty(&r).unwrap());
}
