//! Command-line front end. Every command prints one JSON document holding
//! the echoed configuration and the result; all numbers in it are exact
//! `"num/den"` strings or integers.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bv0::{bv_norm, check_multiplicative, from_bv0, to_bv0, BvSeq};
use crate::certify::{
    cex_lbai_certificate, check_lbai_witness, construct_bai_net, first_ai_candidate,
    geometric_truncation, per_level_report, search_bai_candidate, BaiCertificate, LbaiCertificate,
    LbaiLevel, LbaiRecord,
};
use crate::cex::{self, bounded_subsequence_witness, cex_weight, PHI_CONVENTION};
use crate::error::{Error, Result};
use crate::lp::{growth_certificate, solve_minimax, KRule, LowerBoundInstance};
use crate::rational::{format_q, parse_q, q_frac, Q};
use crate::seq::{brute_product, min_product, FinSeq};
use crate::weights::{check_directed, seminorm, KotheSet, Weight, DEFAULT_HORIZON};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;
pub const EXIT_ERROR: i32 = 4;

pub const HORIZON_ENV: &str = "KOTHE_HORIZON";

#[derive(Debug, Parser, Serialize)]
#[command(name = "kothe", version, about = "Exact certificates for min-product Köthe algebras")]
pub struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Min-product of two sequences, checked against the double sum.
    Product {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Weighted ℓ¹ seminorm of a sequence.
    Norm {
        #[arg(long)]
        a: String,
        #[arg(long)]
        weight: String,
    },
    /// The diagonal enumeration and the weights p^(k).
    #[command(subcommand)]
    Cex(CexCommand),
    /// Check or construct approximate-identity witnesses.
    Certify {
        kind: CertifyKind,
        #[command(flatten)]
        args: CertifyArgs,
    },
    /// Exact minimax lower bound for one support region.
    LpBound(LpBoundArgs),
    /// Minimax lower bounds over a range of start diagonals.
    LpSweep(LpSweepArgs),
    /// The suffix-sum isomorphism onto bv₀.
    #[command(subcommand)]
    Bv0(Bv0Command),
    /// End-to-end report on the counterexample algebra.
    ReproduceCounterexample(ReproduceArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CexCommand {
    Phi {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    PhiInv {
        #[arg(long)]
        n: usize,
    },
    Weight {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    WeightPrefix {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        len: usize,
    },
    Witness {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertifyKind {
    Ai,
    Lbai,
    Bai,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    /// Köthe set: `{"weights":[...],"horizon":N}` or a bare array of weight specs.
    #[arg(long)]
    pub family: String,
    /// Test family: a JSON array of sequences, or a single sequence.
    #[arg(long)]
    pub test: String,
    #[arg(long)]
    pub eps: String,
    /// JSON object mapping weight specs to bounds C.
    #[arg(long)]
    pub bounds: Option<String>,
    /// Candidates e_n are searched up to max support + window.
    #[arg(long, default_value_t = 1000)]
    pub window: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LpBoundArgs {
    #[arg(long)]
    pub delta: String,
    /// Start diagonal D (support in i + j >= D).
    #[arg(long, conflicts_with = "floor", required_unless_present = "floor")]
    pub diagonal: Option<usize>,
    /// Last diagonal in the window; defaults to D + 4.
    #[arg(long, requires = "diagonal")]
    pub dmax: Option<usize>,
    /// Index floor m (support in n >= m), used instead of --diagonal.
    #[arg(long, requires = "ceil")]
    pub floor: Option<usize>,
    /// Last index in the window when --floor is used.
    #[arg(long)]
    pub ceil: Option<usize>,
    #[arg(long)]
    pub kmax: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LpSweepArgs {
    #[arg(long)]
    pub delta: String,
    /// Inclusive range `a..b` or a comma-separated list.
    #[arg(long)]
    pub dlist: String,
    /// `D` (K = D) or `const:K`.
    #[arg(long, default_value = "D")]
    pub krule: String,
    /// Each window covers diagonals D..=D+span.
    #[arg(long, default_value_t = 4)]
    pub span: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bv0Command {
    To {
        #[arg(long)]
        x: String,
    },
    From {
        #[arg(long)]
        x: String,
    },
    Check {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct ReproduceArgs {
    /// Weights p^(1..=kmax) enter the witness and certificate sections.
    #[arg(long, default_value_t = 6)]
    pub kmax: usize,
    /// The growth sweep runs over D = 3..=dmax with K = D.
    #[arg(long, default_value_t = 12)]
    pub dmax: usize,
    /// Length of each bounded-subsequence witness.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value_t = 4)]
    pub span: usize,
}

/// Result of one invocation: exit status and the text for stdout or stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// The horizon from `KOTHE_HORIZON`, or the default.
pub fn env_horizon() -> Result<usize> {
    match std::env::var(HORIZON_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&h| h >= 1)
            .ok_or_else(|| Error::Parse(format!("{HORIZON_ENV}={v:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_HORIZON),
    }
}

pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let horizon = match env_horizon() {
        Ok(h) => h,
        Err(e) => return failure(&e),
    };
    run(&cli, horizon)
}

fn failure(e: &Error) -> Outcome {
    let code = match e {
        Error::Parse(_) | Error::InvalidArgument(_) | Error::InvalidIndex(_) => EXIT_USAGE,
        Error::Refusal(_) => EXIT_REFUSED,
        _ => EXIT_ERROR,
    };
    Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") }
}

pub fn run(cli: &Cli, horizon: usize) -> Outcome {
    match dispatch(&cli.command, horizon) {
        Ok((passed, result)) => {
            let report = json!({
                "command": command_name(&cli.command),
                "config": &cli.command,
                "horizon": horizon,
                "result": result,
            });
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &text) {
                    return Outcome {
                        code: EXIT_ERROR,
                        stdout: String::new(),
                        stderr: format!("error: writing {}: {e}\n", path.display()),
                    };
                }
            }
            Outcome { code: if passed { EXIT_OK } else { EXIT_FAILED }, stdout: text, stderr: String::new() }
        }
        Err(e) => failure(&e),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Product { .. } => "product",
        Command::Norm { .. } => "norm",
        Command::Cex(_) => "cex",
        Command::Certify { .. } => "certify",
        Command::LpBound(_) => "lp-bound",
        Command::LpSweep(_) => "lp-sweep",
        Command::Bv0(_) => "bv0",
        Command::ReproduceCounterexample(_) => "reproduce-counterexample",
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn qv(x: &Q) -> Value {
    Value::String(format_q(x))
}

fn parse_family(s: &str) -> Result<Vec<FinSeq>> {
    if let Ok(list) = serde_json::from_str::<Vec<FinSeq>>(s) {
        return Ok(list);
    }
    FinSeq::from_json(s).map(|a| vec![a])
}

fn parse_bounds(s: &str) -> Result<BTreeMap<String, Q>> {
    let raw: BTreeMap<String, Value> =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("bounds: {e}")))?;
    raw.into_iter()
        .map(|(k, v)| {
            let key = Weight::parse(&k)?.descriptor().to_string();
            let val = match v {
                Value::String(s) => parse_q(&s)?,
                Value::Number(n) if n.is_i64() => parse_q(&n.to_string())?,
                _ => return Err(Error::Parse(format!("bound for {k}: expected rational string"))),
            };
            Ok((key, val))
        })
        .collect()
}

fn parse_dlist(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("diagonal list {s:?}: expected a..b or a,b,c"));
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

fn dispatch(cmd: &Command, horizon: usize) -> Result<(bool, Value)> {
    match cmd {
        Command::Product { a, b } => {
            let (a, b) = (FinSeq::from_json(a)?, FinSeq::from_json(b)?);
            let p = min_product(&a, &b);
            let agrees = p == brute_product(&a, &b);
            Ok((agrees, json!({ "product": p, "matches_double_sum": agrees })))
        }
        Command::Norm { a, weight } => {
            let a = FinSeq::from_json(a)?;
            let w = Weight::parse(weight)?;
            Ok((true, json!({ "weight": w.descriptor(), "norm": qv(&seminorm(&a, &w)) })))
        }
        Command::Cex(c) => cex_command(c),
        Command::Certify { kind, args } => certify_command(*kind, args, horizon),
        Command::LpBound(args) => {
            let delta = parse_q(&args.delta)?;
            let inst = match (args.diagonal, args.floor, args.ceil) {
                (Some(d), _, _) => {
                    LowerBoundInstance::diagonals(delta, d, args.dmax.unwrap_or(d + 4), args.kmax)?
                }
                (None, Some(m), Some(mm)) => LowerBoundInstance::index_range(delta, m, mm, args.kmax)?,
                _ => return Err(Error::InvalidArgument("give --diagonal or --floor/--ceil".into())),
            };
            let cert = solve_minimax(&inst)?;
            Ok((cert.certified, to_value(&cert)))
        }
        Command::LpSweep(args) => {
            let delta = parse_q(&args.delta)?;
            let ds = parse_dlist(&args.dlist)?;
            let rule = KRule::parse(&args.krule)?;
            let g = growth_certificate(&delta, &ds, rule, args.span)?;
            Ok((g.passed, to_value(&g)))
        }
        Command::Bv0(c) => match c {
            Bv0Command::To { x } => {
                let img = to_bv0(&FinSeq::from_json(x)?);
                Ok((true, json!({ "image": img, "bv_norm": qv(&bv_norm(&img)) })))
            }
            Bv0Command::From { x } => {
                let x = BvSeq::from_json(x)?;
                Ok((true, json!({ "preimage": from_bv0(&x), "bv_norm": qv(&bv_norm(&x)) })))
            }
            Bv0Command::Check { a, b } => {
                let c = check_multiplicative(&FinSeq::from_json(a)?, &FinSeq::from_json(b)?);
                Ok((c.passed, to_value(&c)))
            }
        },
        Command::ReproduceCounterexample(args) => reproduce(args, horizon),
    }
}

fn cex_command(c: &CexCommand) -> Result<(bool, Value)> {
    let out = match c {
        CexCommand::Phi { i, j } => json!({ "n": cex::phi(*i, *j)?, "phi_convention": PHI_CONVENTION }),
        CexCommand::PhiInv { n } => {
            let (i, j) = cex::phi_inv(*n)?;
            json!({ "i": i, "j": j, "phi_convention": PHI_CONVENTION })
        }
        CexCommand::Weight { k, n } => {
            if *n == 0 {
                return Err(Error::InvalidIndex(0));
            }
            let w = cex_weight(*k)?;
            json!({ "weight": w.descriptor(), "value": qv(&w.eval(*n)), "phi_convention": PHI_CONVENTION })
        }
        CexCommand::WeightPrefix { k, len } => {
            let w = cex_weight(*k)?;
            let values: Vec<Value> = w.prefix(*len)[..*len].iter().map(qv).collect();
            json!({ "weight": w.descriptor(), "values": values, "phi_convention": PHI_CONVENTION })
        }
        CexCommand::Witness { k, count } => {
            let w = bounded_subsequence_witness(*k, *count)?;
            let ok = w.constant;
            return Ok((ok, json!({ "witness": w, "phi_convention": PHI_CONVENTION })));
        }
    };
    Ok((true, out))
}

fn certify_command(kind: CertifyKind, args: &CertifyArgs, horizon: usize) -> Result<(bool, Value)> {
    let set = KotheSet::parse(&args.family, horizon)?;
    let family = parse_family(&args.test)?;
    let eps = parse_q(&args.eps)?;
    let bounds = args.bounds.as_deref().map(parse_bounds).transpose()?;
    match kind {
        CertifyKind::Ai => {
            let witnesses = set
                .members
                .iter()
                .map(|p| first_ai_candidate(p, &family, &eps, args.window))
                .collect::<Result<Vec<_>>>()?;
            let passed = witnesses.iter().all(|w| w.passed);
            Ok((passed, json!({ "kind": "ai", "witnesses": witnesses, "passed": passed })))
        }
        CertifyKind::Lbai => {
            let report = per_level_report(&set, &family, &eps, args.window)?;
            let mut levels = Vec::with_capacity(set.members.len());
            for (w, level) in set.members.iter().zip(&report.levels) {
                let n = level.n.ok_or_else(|| {
                    Error::Refusal(format!("no candidate for {} within the window", w.descriptor()))
                })?;
                let bound = match &bounds {
                    Some(b) => b
                        .get(w.descriptor())
                        .cloned()
                        .ok_or_else(|| Error::MissingBound(w.descriptor().to_string()))?,
                    None => level.bound.clone().expect("found with n"),
                };
                let b = FinSeq::basis(n)?;
                let check = check_lbai_witness(&family, &b, w, &eps, &bound)?;
                levels.push(LbaiLevel {
                    weight: w.descriptor().to_string(),
                    bound,
                    records: vec![LbaiRecord {
                        test: family.clone(),
                        eps: eps.clone(),
                        b,
                        defects: check.ai.defects,
                        norm: check.norm,
                        passed: check.passed,
                    }],
                });
            }
            let passed = levels.iter().all(|l| l.records.iter().all(|r| r.passed));
            let cert = LbaiCertificate { horizon: set.horizon, levels, passed };
            Ok((passed, json!({ "kind": "lbai", "search": report, "certificate": cert })))
        }
        CertifyKind::Bai => {
            let check = search_bai_candidate(&set, &family, &eps, bounds.as_ref(), args.window)?;
            let used: BTreeMap<String, Q> = match &bounds {
                Some(b) => b.clone(),
                None => check.levels.iter().map(|l| (l.weight.clone(), l.bound.clone())).collect(),
            };
            let cert = BaiCertificate::new(&used, vec![check]);
            let passed = cert.passed;
            Ok((passed, json!({ "kind": "bai", "bounds_prescribed": bounds.is_some(), "certificate": cert })))
        }
    }
}

/// Fixed test families for the locally bounded certificate.
pub fn reference_test_families() -> Vec<Vec<FinSeq>> {
    let e = |i| FinSeq::basis(i).expect("positive index");
    vec![
        vec![],
        vec![e(1)],
        vec![&e(1) + &e(2)],
        vec![geometric_truncation(&q_frac(1, 2), 8)],
        vec![&e(3) - &e(7).scale(&q_frac(2, 1)), e(10)],
        vec![e(cex::phi(4, 4).expect("small")), geometric_truncation(&q_frac(-1, 3), 5)],
    ]
}

fn reproduce(args: &ReproduceArgs, horizon: usize) -> Result<(bool, Value)> {
    if args.kmax == 0 || args.dmax < 3 || args.count == 0 {
        return Err(Error::InvalidArgument("need kmax >= 1, dmax >= 3, count >= 1".into()));
    }
    let set = KotheSet::cex_family(args.kmax, horizon)?;
    let directed = check_directed(&set);

    // (i) every p^(k) has a bounded subsequence, while row 1 is unbounded.
    let witnesses = (1..=args.kmax)
        .map(|k| bounded_subsequence_witness(k, args.count))
        .collect::<Result<Vec<_>>>()?;
    let mut first_rows = Vec::with_capacity(args.kmax);
    let mut rows_unbounded = true;
    for k in 1..=args.kmax {
        let w = cex_weight(k)?;
        let values = (1..=args.count)
            .map(|j| Ok(w.eval(cex::phi(1, j)?)))
            .collect::<Result<Vec<Q>>>()?;
        rows_unbounded &= values.iter().enumerate().all(|(j, v)| *v == Q::from_integer((j + 1).into()));
        first_rows.push(json!({ "k": k, "values": values.iter().map(qv).collect::<Vec<_>>() }));
    }
    let property_i = witnesses.iter().all(|w| w.constant) && rows_unbounded;

    // Locally bounded a.i.: C_k = k + 1 with exact witnesses.
    let families = reference_test_families();
    let lbai = cex_lbai_certificate(args.kmax, &families, horizon)?;

    // Row φ(2, ·) is not a common bounded subsequence: the observed sup of
    // p^(2) along it keeps growing.
    let row2: Vec<usize> = (1..=args.count)
        .map(|j| cex::phi(2, j))
        .collect::<Result<Vec<_>>>()?;
    let pair = KotheSet::cex_family(2.min(args.kmax).max(1), horizon)?;
    let net = construct_bai_net(&row2, &families[2], &pair)?;

    // (ii) norms forced by the b.a.i. condition grow with D.
    let ds: Vec<usize> = (3..=args.dmax).collect();
    let growth = growth_certificate(&Q::from_integer(1.into()), &ds, KRule::Diagonal, args.span)?;
    let expected_d_minus_one = growth
        .rows
        .iter()
        .all(|r| r.value == Q::from_integer((r.diagonal - 1).into()));

    let passed = directed.passed && property_i && lbai.passed && growth.passed && growth.strictly_increasing;
    Ok((
        passed,
        json!({
            "phi_convention": PHI_CONVENTION,
            "directedness": directed,
            "bounded_subsequences": {
                "witnesses": witnesses,
                "first_rows": first_rows,
                "first_rows_unbounded": rows_unbounded,
                "passed": property_i,
            },
            "locally_bounded_ai": lbai,
            "common_subsequence_attempt": net,
            "norm_growth": growth,
            "norm_growth_is_d_minus_one": expected_d_minus_one,
            "conclusion": {
                "has_locally_bounded_ai": lbai.passed && property_i,
                "bounded_ai_excluded": growth.passed && growth.strictly_increasing,
                "norm_lower_bound_reached": qv(&growth.sup_lower_bound),
            },
            "passed": passed,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        let mut v = vec!["kothe"];
        v.extend_from_slice(args);
        run_from_args(v)
    }

    fn result(o: &Outcome) -> Value {
        let v: Value = serde_json::from_str(&o.stdout).expect("json");
        v["result"].clone()
    }

    #[test]
    fn norm_command() {
        let o = run(&["norm", "--a", r#"[[1,"1/1"]]"#, "--weight", "const:1"]);
        assert_eq!(o.code, EXIT_OK);
        assert_eq!(result(&o)["norm"], "1/1");
    }

    #[test]
    fn malformed_rational() {
        let o = run(&["norm", "--a", r#"[[1,"1/0"]]"#, "--weight", "const:1"]);
        assert_eq!(o.code, EXIT_USAGE);
        assert!(o.stderr.contains("error"));
        let o = run(&["lp-bound", "--delta", "1/0", "--diagonal", "4", "--kmax", "2"]);
        assert_eq!(o.code, EXIT_USAGE);
    }

    #[test]
    fn cex_commands() {
        assert_eq!(result(&run(&["cex", "phi", "--i", "3", "--j", "4"]))["n"], 18);
        let r = result(&run(&["cex", "phi-inv", "--n", "6"]));
        assert_eq!((r["i"].clone(), r["j"].clone()), (json!(3), json!(1)));
        assert_eq!(result(&run(&["cex", "weight", "--k", "2", "--n", "18"]))["value"], "3/1");
        let r = result(&run(&["cex", "weight-prefix", "--k", "1", "--len", "6"]));
        assert_eq!(r["values"], json!(["1/1", "2/1", "2/1", "3/1", "2/1", "3/1"]));
        let r = result(&run(&["cex", "witness", "--k", "1", "--count", "3"]));
        assert_eq!(r["witness"]["indices"], json!([3, 5, 8]));
        assert_eq!(run(&["cex", "phi", "--i", "0", "--j", "1"]).code, EXIT_USAGE);
    }

    #[test]
    fn product_and_bv0() {
        let r = result(&run(&["product", "--a", r#"[[1,"1/1"],[2,"1/1"]]"#, "--b", r#"[[2,"1/1"]]"#]));
        assert_eq!(r["product"], json!([[1, "1/1"], [2, "1/1"]]));
        let r = result(&run(&["bv0", "to", "--x", r#"[[3,"1/1"]]"#]));
        assert_eq!(r["image"], json!([[1, "1/1"], [2, "1/1"], [3, "1/1"]]));
        let r = result(&run(&["bv0", "from", "--x", r#"[[1,"1/1"],[2,"1/1"],[3,"1/1"]]"#]));
        assert_eq!(r["preimage"], json!([[3, "1/1"]]));
        let o = run(&["bv0", "check", "--a", r#"[[2,"1/1"]]"#, "--b", r#"[[3,"1/1"]]"#]);
        assert_eq!(o.code, EXIT_OK);
    }

    #[test]
    fn certify_commands() {
        let fam = r#"{"weights":["cex:1","cex:2"],"horizon":500}"#;
        let test = r#"[[[1,"1/1"],[12,"1/1"]]]"#;
        let o = run(&["certify", "lbai", "--family", fam, "--test", test, "--eps", "0"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        let r = result(&o);
        assert_eq!(r["certificate"]["levels"][0]["bound"], "2/1");
        assert_eq!(r["certificate"]["levels"][1]["bound"], "3/1");

        let o = run(&["certify", "ai", "--family", fam, "--test", r#"[[5,"1/1"]]"#, "--eps", "0"]);
        assert_eq!(o.code, EXIT_OK);

        let o = run(&[
            "certify", "bai", "--family", r#"["const:1"]"#, "--test", test, "--eps", "0",
            "--bounds", r#"{"const:1":"1"}"#,
        ]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);

        let o = run(&[
            "certify", "bai", "--family", fam, "--test", test, "--eps", "0",
            "--bounds", r#"{"cex:1":"1","cex:2":"1"}"#,
        ]);
        assert_eq!(o.code, EXIT_REFUSED);

        let o = run(&[
            "certify", "lbai", "--family", fam, "--test", test, "--eps", "0",
            "--bounds", r#"{"cex:1":"1","cex:2":"5"}"#,
        ]);
        assert_eq!(o.code, EXIT_FAILED);

        let o = run(&[
            "certify", "lbai", "--family", fam, "--test", test, "--eps", "0",
            "--bounds", r#"{"cex:1":"2"}"#,
        ]);
        assert_eq!(o.code, EXIT_ERROR);
    }

    #[test]
    fn lp_commands() {
        let o = run(&["lp-bound", "--delta", "1", "--diagonal", "5", "--dmax", "12", "--kmax", "3"]);
        assert_eq!(o.code, EXIT_OK);
        assert_eq!(result(&o)["value"], "4/1");
        let o = run(&["lp-bound", "--delta", "1", "--floor", "7", "--ceil", "40", "--kmax", "3"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        let o = run(&["lp-sweep", "--delta", "1/2", "--dlist", "3..6", "--krule", "const:2"]);
        assert_eq!(o.code, EXIT_OK);
        let vals: Vec<Value> = result(&o)["rows"].as_array().unwrap().iter().map(|r| r["value"].clone()).collect();
        assert_eq!(vals, vec![json!("1/1"), json!("3/2"), json!("3/2"), json!("3/2")]);
        assert_eq!(run(&["lp-sweep", "--delta", "0", "--dlist", "3..5"]).code, EXIT_USAGE);
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_dlist("3..6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_dlist("3..=4").unwrap(), vec![3, 4]);
        assert_eq!(parse_dlist("3,5,9").unwrap(), vec![3, 5, 9]);
        assert!(parse_dlist("x").is_err());
        assert_eq!(parse_family("[]").unwrap(), Vec::<FinSeq>::new());
        assert_eq!(parse_family(r#"[[1,"1/1"]]"#).unwrap().len(), 1);
        let b = parse_bounds(r#"{"const:1":"2","cex:k=3":4}"#).unwrap();
        assert_eq!(b.keys().cloned().collect::<Vec<_>>(), vec!["cex:3".to_string(), "const:1/1".to_string()]);
    }
}
