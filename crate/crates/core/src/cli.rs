//! The `logdisc` command line: argument parsing, document IO and run reports.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arrangement::Arrangement;
use crate::critical::{membership_numeric, solve_critical, to_complex, Tolerances};
use crate::discriminant::{discriminant, expected_degree, DiscMethod, ElimOptions};
use crate::error::Error;
use crate::moduli::{gram_minor_check, m05_discriminant, m0m_arrangement, soft_limit_m06_with, soft_limit_weight};
use crate::poly::Poly;
use crate::polytope::{initial_form, newton_polytope};
use crate::rational::{format_rat, parse_rat, Rat};
use crate::reciprocal::circuit_generators;

pub const THREADS_ENV: &str = "LOGDISC_THREADS";

#[derive(Parser, Debug)]
#[command(name = "logdisc", version, about = "Logarithmic discriminants of hyperplane arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Indent the JSON and print polynomials in readable form on stderr.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct TolArgs {
    #[arg(long, default_value_t = 1e-10)]
    tol_res: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_wall: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_deg: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_collision: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances { res: self.tol_res, wall: self.tol_wall, deg: self.tol_deg, collision: self.tol_collision }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Auto,
    D1,
    Elim,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate an arrangement document.
    Check { arr: PathBuf },
    /// Characteristic polynomial, region counts and ML degree.
    Chi { arr: PathBuf },
    /// Critical points of the log-likelihood for exponents `u`.
    Crit {
        arr: PathBuf,
        #[arg(long, value_parser = rat_list, allow_hyphen_values = true)]
        u: RatList,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Logarithmic discriminant with certification.
    Disc {
        arr: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Numerical membership test for `u`.
    Member {
        arr: PathBuf,
        #[arg(long, value_parser = rat_list, allow_hyphen_values = true)]
        u: RatList,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Newton polytope of a polynomial document.
    Newton { poly: PathBuf },
    /// Initial form of a polynomial document for a weight vector.
    Initial {
        poly: PathBuf,
        #[arg(long, value_parser = rat_list, allow_hyphen_values = true)]
        w: RatList,
    },
    /// Circuit generators of the reciprocal linear space.
    Circuits { arr: PathBuf },
    /// The arrangement of M_{0,m} with Mandelstam labels.
    M0m {
        #[arg(long)]
        m: usize,
    },
    /// Gram-matrix minors against the M_{0,5} discriminant.
    Gram {
        #[arg(long, value_parser = rat_list, allow_hyphen_values = true)]
        u: RatList,
    },
    /// Soft limit of particle `k` on M_{0,m}.
    Softlimit {
        #[arg(long, default_value_t = 6)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
}

#[derive(Clone, Debug)]
struct RatList(Vec<Rat>);

fn rat_list(s: &str) -> std::result::Result<RatList, String> {
    s.split(',').enumerate().map(|(i, p)| parse_rat(p.trim()).map_err(|e| format!("entry {i}: {e}"))).collect::<std::result::Result<_, _>>().map(RatList)
}

impl RatList {
    fn text(&self) -> String {
        self.0.iter().map(format_rat).collect::<Vec<_>>().join(",")
    }
}

#[derive(Serialize, Debug)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Value,
    pub timings: BTreeMap<String, f64>,
    pub seed: u64,
    pub tool_version: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

struct Run {
    inputs: BTreeMap<String, String>,
    timings: BTreeMap<String, f64>,
    human: Vec<String>,
}

impl Run {
    fn read(&mut self, name: &str, path: &Path) -> Outcome<String> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.insert(name.to_string(), sha256_hex(text.as_bytes()));
        Ok(text)
    }

    fn arg(&mut self, name: &str, value: &str) {
        self.inputs.insert(name.to_string(), sha256_hex(value.as_bytes()));
    }

    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.insert(stage.to_string(), t.elapsed().as_secs_f64());
        out
    }

    fn arrangement(&mut self, path: &Path) -> Outcome<Arrangement> {
        let text = self.read("arrangement", path)?;
        Ok(self.time("parse", || Arrangement::from_json_str(&text))?)
    }

    fn poly(&mut self, path: &Path) -> Outcome<Poly> {
        let text = self.read("polynomial", path)?;
        Ok(self.time("parse", || Poly::from_json_str(&text))?)
    }
}

fn poly_json(p: &Poly) -> Value {
    json!({"poly": p.to_json(), "text": p.to_text()})
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Chi { .. } => "chi",
        Command::Crit { .. } => "crit",
        Command::Disc { .. } => "disc",
        Command::Member { .. } => "member",
        Command::Newton { .. } => "newton",
        Command::Initial { .. } => "initial",
        Command::Circuits { .. } => "circuits",
        Command::M0m { .. } => "m0m",
        Command::Gram { .. } => "gram",
        Command::Softlimit { .. } => "softlimit",
    }
}

fn dispatch(cmd: &Command, seed: u64, run: &mut Run) -> Outcome<Value> {
    match cmd {
        Command::Check { arr } => {
            let a = run.arrangement(arr)?;
            let report = run.time("validate", || a.validate());
            Ok(json!({
                "d": a.d(),
                "n_plus_1": a.n_plus_1(),
                "forms": a.forms().iter().map(Poly::to_text).collect::<Vec<_>>(),
                "labels": a.labels(),
                "validation": report,
            }))
        }
        Command::Chi { arr } => {
            let a = run.arrangement(arr)?;
            let (chi, regions, bounded, ml) = run.time("chi", || -> crate::Result<_> {
                Ok((a.characteristic_polynomial()?, a.regions()?, a.bounded_regions()?, a.ml_degree()?))
            })?;
            run.human.push(format!("chi(t) = {}", chi.to_text()));
            Ok(json!({"chi": chi.to_compact(), "regions": regions, "bounded": bounded, "ml_degree": ml}))
        }
        Command::Crit { arr, u, tol } => {
            let a = run.arrangement(arr)?;
            run.arg("u", &u.text());
            let s = run.time("solve", || solve_critical(&a, &to_complex(&u.0), seed, &tol.tolerances()))?;
            Ok(s.to_json())
        }
        Command::Disc { arr, method } => {
            let a = run.arrangement(arr)?;
            let m = match method {
                MethodArg::Auto => DiscMethod::Auto,
                MethodArg::D1 => DiscMethod::D1,
                MethodArg::Elim => DiscMethod::Elim,
            };
            let opts = ElimOptions { seed, ..Default::default() };
            let r = run.time("discriminant", || discriminant(&a, m, &opts))?;
            for f in &r.factors {
                run.human.push(format!("({})^{}{}", f.poly.to_text(), f.multiplicity, if f.certified { "" } else { "  [uncertified]" }));
            }
            let mut out = r.to_json();
            out["expected_degree"] = serde_json::to_value(expected_degree(&a)).expect("serializable");
            Ok(out)
        }
        Command::Member { arr, u, tol } => {
            let a = run.arrangement(arr)?;
            run.arg("u", &u.text());
            let r = run.time("membership", || membership_numeric(&a, &to_complex(&u.0), seed, &tol.tolerances()))?;
            Ok(serde_json::to_value(r).expect("serializable"))
        }
        Command::Newton { poly } => {
            let f = run.poly(poly)?;
            let p = run.time("hull", || newton_polytope(&f))?;
            let fv = run.time("faces", || p.f_vector())?;
            let mut out = serde_json::to_value(&p).expect("serializable");
            out["f_vector"] = json!(fv);
            Ok(out)
        }
        Command::Initial { poly, w } => {
            let f = run.poly(poly)?;
            run.arg("w", &w.text());
            let g = run.time("initial", || initial_form(&f, &w.0))?;
            run.human.push(g.to_text());
            Ok(poly_json(&g))
        }
        Command::Circuits { arr } => {
            let a = run.arrangement(arr)?;
            let r = run.time("circuits", || circuit_generators(&a))?;
            let mut gens = serde_json::Map::new();
            for g in &r.generators {
                let key = g.support.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
                run.human.push(format!("T = {{{key}}}: {}", g.poly.to_text()));
                gens.insert(key, g.to_json());
            }
            Ok(json!({"generators": gens, "warnings": r.warnings}))
        }
        Command::M0m { m } => {
            run.arg("m", &m.to_string());
            let (a, map) = m0m_arrangement(*m)?;
            let ml = run.time("ml_degree", || a.ml_degree())?;
            Ok(json!({
                "arrangement": a.to_doc(),
                "labels": map.labels(),
                "pairs": map.pairs,
                "forms": a.forms().iter().map(Poly::to_text).collect::<Vec<_>>(),
                "ml_degree": ml,
            }))
        }
        Command::Gram { u } => {
            run.arg("u", &u.text());
            let r = run.time("gram", || gram_minor_check(&u.0))?;
            Ok(serde_json::to_value(r).expect("serializable"))
        }
        Command::Softlimit { m, k } => {
            run.arg("m", &m.to_string());
            run.arg("k", &k.to_string());
            let w = soft_limit_weight(*m, *k)?;
            match (m, k) {
                (5, _) => {
                    let (arr, _) = m0m_arrangement(5)?;
                    let delta = m05_discriminant(&arr.u_vars()).rename(arr.labels().expect("labelled"));
                    let wr: Vec<Rat> = w.iter().map(|&x| Rat::from_integer(x.into())).collect();
                    let g = run.time("initial", || initial_form(&delta, &wr))?;
                    run.human.push(g.to_text());
                    Ok(json!({"m": 5, "k": k, "weight": w, "initial_form": poly_json(&g)}))
                }
                (6, 5) => {
                    let r = run.time("recipe", || soft_limit_m06_with(seed, &mut |line| eprintln!("softlimit: {line}")))?;
                    let mut out = serde_json::to_value(&r).expect("serializable");
                    if let Some(g) = &r.second_factor {
                        out["second_factor"] = g.to_json();
                    }
                    run.human.push(format!("lower factor ({})^{}", r.lower_factor, r.lower_multiplicity));
                    Ok(out)
                }
                _ => Err(Failure::Domain(Error::Invalid(format!(
                    "soft limits are implemented for m = 5 and for (m, k) = (6, 5), not ({m}, {k})"
                )))),
            }
        }
    }
}

fn configure_threads() -> Outcome<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
    if n == 0 {
        return Err(Failure::Usage(format!("{THREADS_ENV} must be positive")));
    }
    // a pool built earlier in the process wins
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn emit(report: &RunReport, cli: &Cli) -> Outcome<()> {
    let mut text = if cli.pretty {
        serde_json::to_string_pretty(report)
    } else {
        serde_json::to_string(report)
    }
    .expect("serializable");
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Usage(format!("stdout: {e}")))
        }
    }
}

/// Builds the run report for already parsed arguments.
fn execute(cli: &Cli) -> Outcome<(RunReport, Vec<String>)> {
    let mut run = Run { inputs: BTreeMap::new(), timings: BTreeMap::new(), human: Vec::new() };
    let t = Instant::now();
    let outputs = dispatch(&cli.command, cli.seed, &mut run)?;
    run.timings.insert("total".into(), t.elapsed().as_secs_f64());
    let report = RunReport {
        command: name(&cli.command).to_string(),
        inputs: run.inputs,
        outputs,
        timings: run.timings,
        seed: cli.seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    Ok((report, run.human))
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code: 0 on success, 1 on a domain error, 2 on a usage error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = configure_threads().and_then(|()| execute(&cli)).and_then(|(report, human)| {
        emit(&report, &cli)?;
        if cli.pretty {
            for line in human {
                eprintln!("{line}");
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", json!({"error": e.to_string()}));
            1
        }
    }
}
