use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::Value;
use sha2::{Digest, Sha256};

use logdisc::cli;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_str().unwrap().to_string()
}

fn scratch(tag: &str) -> PathBuf {
    static N: AtomicUsize = AtomicUsize::new(0);
    std::env::temp_dir().join(format!("logdisc-cli-{}-{tag}-{}.json", std::process::id(), N.fetch_add(1, Ordering::SeqCst)))
}

fn run(args: &[&str]) -> (i32, Option<Value>) {
    let out = scratch("out");
    let mut full = vec!["logdisc"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let code = cli::run(full);
    let report = std::fs::read_to_string(&out).ok().map(|s| serde_json::from_str(&s).unwrap());
    let _ = std::fs::remove_file(&out);
    (code, report)
}

fn ok(args: &[&str]) -> Value {
    let (code, report) = run(args);
    assert_eq!(code, 0, "{args:?}");
    report.expect("report written")
}

fn sha(path: &str) -> String {
    let bytes = std::fs::read(Path::new(path)).unwrap();
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn report_carries_hashes_seed_and_version() {
    let path = data("m05.json");
    let r = ok(&["chi", &path, "--seed", "7"]);
    assert_eq!(r["command"], "chi");
    assert_eq!(r["inputs"]["arrangement"], sha(&path));
    assert_eq!(r["seed"], 7);
    assert_eq!(r["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(r["timings"].as_object().unwrap().values().all(|t| t.as_f64().unwrap() >= 0.0));
    assert_eq!(r["outputs"]["chi"], "t^2-5*t+6");
    assert_eq!(r["outputs"]["ml_degree"], 2);
}

#[test]
fn seed_defaults_to_zero() {
    let r = ok(&["check", &data("simplex3.json")]);
    assert_eq!(r["seed"], 0);
}

#[test]
fn critical_points_are_reproducible() {
    let path = data("m05.json");
    let a = ok(&["crit", &path, "--u", "2,3,5,7,-1", "--seed", "3"]);
    let b = ok(&["crit", &path, "--u", "2,3,5,7,-1", "--seed", "3"]);
    assert_eq!(a["outputs"], b["outputs"]);
    assert_eq!(a["inputs"], b["inputs"]);
}

#[test]
fn discriminant_feeds_newton_and_initial() {
    let disc = ok(&["disc", &data("m05.json")]);
    let poly = disc["outputs"]["factors"][0]["poly"].clone();
    let file = scratch("poly");
    std::fs::write(&file, serde_json::to_string(&poly).unwrap()).unwrap();
    let f = file.to_str().unwrap();
    let newton = ok(&["newton", f]);
    assert_eq!(newton["outputs"]["f_vector"], serde_json::json!([7, 17, 18, 8]));
    let init = ok(&["initial", f, "--w", "1,0,0,0,0"]);
    assert_eq!(init["inputs"]["polynomial"], sha(f));
    let _ = std::fs::remove_file(&file);
}

#[test]
fn membership_of_positive_exponents() {
    let r = ok(&["member", &data("m05.json"), "--u", "1,2,3,4,5"]);
    assert_eq!(r["outputs"]["verdict"], "outside");
}

#[test]
fn gram_accepts_negative_entries() {
    let r = ok(&["gram", "--u", "-1/2,1,2,-1/2,-1"]);
    assert_eq!(r["outputs"]["delta"], "-7/16");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).0, 2);
    assert_eq!(run(&["disc"]).0, 2);
    assert_eq!(run(&["chi", "/nonexistent/arrangement.json"]).0, 2);
    assert_eq!(run(&["gram", "--u", "1,2"]).0, 1);
    assert_eq!(run(&["m0m", "--m", "3"]).0, 1);
}
