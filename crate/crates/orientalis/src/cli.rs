//! The `orientalis` command line. Every subcommand prints one JSON document
//! on stdout and maps its outcome to an exit code: 0 for success, 1 when a
//! verification fails, 2 for invalid input.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use orientalis_core::anodyne::{generate_certificate_with, verify_a_join_structure};
use orientalis_core::certificate::{replay, Certificate, JoinOrder, Rejection};
use orientalis_core::enumeration::{compare_strategies, enumerate_by_closure, Oracle, DEFAULT_BOUND};
use orientalis_core::operator::MAX_LEN;
use orientalis_core::pasting::{fill, paste};
use orientalis_core::{check_membership, Chain};
use serde_json::{json, Value};

use crate::format::{chain_to_value, parse_chain_input, read_certificate, write_certificate};
use crate::parallel::enumerate_parallel;

pub const FIXTURES_ENV: &str = "ORIENTALIS_FIXTURES";

#[derive(Debug, Parser)]
#[command(name = "orientalis", version, about = "Exact checks on the nerves of the orientals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a chain for membership in O(m,n).
    Check {
        #[arg(long)]
        n: Option<usize>,
        /// Chain literal or JSON; read from stdin when omitted.
        chain: Option<String>,
    },
    /// Paste two composable chains: x ∘_k y.
    Paste(PairArgs),
    /// The filler x ∧_k y of two composable chains.
    Fill(PairArgs),
    /// Enumerate O(m,n) for every m up to --m.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        #[arg(long, value_enum, default_value_t = Strategy::Search)]
        strategy: Strategy,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Write the result as a regression fixture.
        #[arg(long)]
        freeze: bool,
    },
    /// Generate a certificate for Δ[n] -> O(-,n) through --max-dim.
    Certify {
        #[command(flatten)]
        run: RunArgs,
        /// Certificate path; the certificate goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a certificate and compare the result with the oracle.
    Verify {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "max-dim")]
        max_dim: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Certificate path, or `-` for stdin.
        certificate: PathBuf,
    },
    /// Certify, replay and compare with the oracle in one run.
    Theorem {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: usize,
    pub x: String,
    pub y: String,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "max-dim")]
    pub max_dim: usize,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    pub bound: i64,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Search,
    Closure,
    Both,
}

/// A finished command: exit code and the JSON document to print. `raw` is
/// printed instead when a command streams its own output.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub raw: Option<String>,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome {
            code: 0,
            report,
            raw: None,
        }
    }

    fn failed(report: Value) -> Self {
        Outcome {
            code: 1,
            report,
            raw: None,
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Outcome {
            code: 2,
            report: json!({"error": "invalid input", "message": message.into()}),
            raw: None,
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Outcome {
            code: 1,
            report: json!({"error": "internal", "message": message.into()}),
            raw: None,
        }
    }
}

// Operators carry at most MAX_LEN values, and parents live one dimension up.
const MAX_DIM: usize = MAX_LEN - 2;

pub fn run(cli: Cli, stdin: &mut dyn Read) -> Outcome {
    match cli.command {
        Command::Check { n, chain } => {
            let text = match chain {
                Some(t) => t,
                None => {
                    let mut s = String::new();
                    if let Err(e) = stdin.read_to_string(&mut s) {
                        return Outcome::invalid(format!("cannot read stdin: {e}"));
                    }
                    s
                }
            };
            check(&text, n)
        }
        Command::Paste(args) => pair(args, false),
        Command::Fill(args) => pair(args, true),
        Command::Enumerate {
            n,
            m,
            bound,
            strategy,
            jobs,
            freeze,
        } => enumerate(n, m, bound, strategy, jobs, freeze),
        Command::Certify { run, out } => certify(&run, out.as_deref()),
        Command::Verify {
            n,
            max_dim,
            bound,
            jobs,
            certificate,
        } => verify(n, max_dim, bound, jobs, &certificate, stdin),
        Command::Theorem { run, out } => theorem(&run, out.as_deref()),
    }
}

fn check(text: &str, n: Option<usize>) -> Outcome {
    let x = match parse_chain_input(text, n) {
        Ok(x) => x,
        Err(e) => return Outcome::invalid(e),
    };
    match check_membership(&x) {
        Ok(s) => Outcome::ok(json!({
            "result": "member",
            "chain": chain_to_value(&x),
            "literal": x.to_string(),
            "vertices": s.vertices().collect::<Vec<_>>(),
            "marked": s.is_marked(),
            "in_a": s.in_a(),
            "degenerate": s.is_degenerate(),
        })),
        Err(v) => Outcome::failed(json!({
            "result": "not a member",
            "chain": chain_to_value(&x),
            "literal": x.to_string(),
            "violation": v.to_string(),
        })),
    }
}

fn pair(args: PairArgs, filler: bool) -> Outcome {
    let parse = |t: &str| parse_chain_input(t, args.n);
    let (x, y) = match (parse(&args.x), parse(&args.y)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return Outcome::invalid(e),
    };
    let result = if filler {
        fill(&x, &y, args.k)
    } else {
        paste(&x, &y, args.k)
    };
    match result {
        Ok(z) => Outcome::ok(json!({
            "result": chain_to_value(&z),
            "literal": z.to_string(),
            "member": check_membership(&z).is_ok(),
        })),
        Err(e) => Outcome::invalid(e.to_string()),
    }
}

fn validate_bound(bound: i64) -> Result<(), Outcome> {
    if bound < 1 {
        return Err(Outcome::invalid("--bound must be at least 1"));
    }
    Ok(())
}

fn counts_value(oracle: &Oracle) -> Value {
    json!({
        "members": oracle.counts(),
        "nondegenerate": oracle.nondegenerate_counts(),
        "boundary_hit": (0..=oracle.max_dim()).map(|m| oracle.boundary_hit(m)).collect::<Vec<_>>(),
        "certified": oracle.certified(),
    })
}

fn fixture_path(n: usize, m: usize, bound: i64) -> PathBuf {
    let dir = std::env::var_os(FIXTURES_ENV).map_or_else(|| PathBuf::from("fixtures"), PathBuf::from);
    dir.join(format!("enumerate-n{n}-m{m}-b{bound}.json"))
}

fn fixture_value(oracle: &Oracle) -> Value {
    let levels: Vec<Vec<String>> = (0..=oracle.max_dim())
        .map(|m| oracle.members(m).iter().map(|x| x.to_string()).collect())
        .collect();
    json!({
        "n": oracle.target(),
        "max_dim": oracle.max_dim(),
        "bound": oracle.bound(),
        "counts": counts_value(oracle),
        "members": levels,
    })
}

fn enumerate(n: usize, m: usize, bound: i64, strategy: Strategy, jobs: usize, freeze: bool) -> Outcome {
    if let Err(o) = validate_bound(bound) {
        return o;
    }
    if m > MAX_DIM || n > MAX_DIM {
        return Outcome::invalid(format!("--n and --m must be at most {MAX_DIM}"));
    }
    let tags: &[&str] = match strategy {
        Strategy::Search => &["search"],
        Strategy::Closure => &["closure"],
        Strategy::Both => &["search", "closure"],
    };
    let mut report = json!({"command": "enumerate", "n": n, "max_dim": m, "bound": bound, "strategies": tags});
    let mut failed = false;
    let search = if strategy != Strategy::Closure {
        match enumerate_parallel(m, n, bound, jobs) {
            Ok(o) => {
                report["search"] = counts_value(&o);
                Some(o)
            }
            Err(e) => return Outcome::internal(e.to_string()),
        }
    } else {
        None
    };
    if strategy != Strategy::Search {
        let closure = match enumerate_by_closure(n, m) {
            Ok(c) => c,
            Err(e) => return Outcome::internal(e.to_string()),
        };
        report["closure"] = json!({"members": closure.counts()});
        if let Some(o) = &search {
            let a = compare_strategies(o, &closure);
            let literals = |v: &[Chain]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            failed |= !a.agree();
            report["agreement"] = json!({
                "agree": a.agree(),
                "exact": a.exact(),
                "missing_from_closure": literals(&a.missing_from_closure),
                "missing_from_search": literals(&a.missing_from_search),
            });
        }
    }
    if let Some(o) = &search {
        let path = fixture_path(n, m, bound);
        if freeze {
            let written = path
                .parent()
                .map_or(Ok(()), std::fs::create_dir_all)
                .and_then(|_| std::fs::write(&path, serde_json::to_string_pretty(&fixture_value(o)).expect("json")));
            if let Err(e) = written {
                return Outcome::invalid(format!("cannot write {}: {e}", path.display()));
            }
            report["fixture"] = json!({"status": "written", "path": path.display().to_string()});
        } else if let Ok(text) = std::fs::read_to_string(&path) {
            let same = serde_json::from_str::<Value>(&text).ok() == Some(fixture_value(o));
            failed |= !same;
            report["fixture"] = json!({
                "status": if same { "match" } else { "mismatch" },
                "path": path.display().to_string(),
            });
        }
    }
    report["status"] = json!(if failed { "failed" } else { "ok" });
    if failed {
        Outcome::failed(report)
    } else {
        Outcome::ok(report)
    }
}

fn validate_run(n: usize, max_dim: usize, bound: i64) -> Result<(), Outcome> {
    validate_bound(bound)?;
    if max_dim < n {
        return Err(Outcome::invalid("--max-dim must be at least --n"));
    }
    if max_dim > MAX_DIM {
        return Err(Outcome::invalid(format!("--max-dim must be at most {MAX_DIM}")));
    }
    Ok(())
}

fn oracles(n: usize, max_dim: usize, bound: i64, jobs: usize) -> Result<Vec<Oracle>, Outcome> {
    let depth = max_dim.saturating_sub(1);
    let out = (0..=n)
        .map(|t| enumerate_parallel(depth, t, bound, jobs))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Outcome::internal(e.to_string()))?;
    if let Some(o) = out.iter().find(|o| !o.certified()) {
        return Err(Outcome::failed(json!({
            "error": "bound too small",
            "message": format!("O(-,{}) touches coefficient bound {bound}; raise --bound", o.target()),
        })));
    }
    Ok(out)
}

fn join_order_name(order: JoinOrder) -> &'static str {
    match order {
        JoinOrder::Interleaved => "interleaved",
        JoinOrder::OriginalsFirst => "originals-first",
    }
}

fn write_to(path: &Path, cert: &Certificate) -> Result<(), Outcome> {
    File::create(path)
        .and_then(|f| write_certificate(BufWriter::new(f), cert))
        .map_err(|e| Outcome::invalid(format!("cannot write {}: {e}", path.display())))
}

fn certify(run: &RunArgs, out: Option<&Path>) -> Outcome {
    if let Err(o) = validate_run(run.n, run.max_dim, run.bound) {
        return o;
    }
    let oracles = match oracles(run.n, run.max_dim, run.bound, run.jobs) {
        Ok(o) => o,
        Err(o) => return o,
    };
    let cert = match generate_certificate_with(&oracles, run.max_dim) {
        Ok(c) => c,
        Err(e) => return Outcome::failed(json!({"error": "generation failed", "message": e.to_string()})),
    };
    match out {
        Some(path) => {
            if let Err(o) = write_to(path, &cert) {
                return o;
            }
            Outcome::ok(certificate_summary(&cert, Some(path)))
        }
        None => {
            let mut buf = Vec::new();
            write_certificate(&mut buf, &cert).expect("writing to memory");
            Outcome {
                code: 0,
                report: certificate_summary(&cert, None),
                raw: Some(String::from_utf8(buf).expect("JSON is UTF-8")),
            }
        }
    }
}

fn certificate_summary(cert: &Certificate, path: Option<&Path>) -> Value {
    json!({
        "command": "certify",
        "n": cert.n,
        "max_dim": cert.max_dim,
        "steps": cert.steps.len(),
        "join_order": join_order_name(cert.join_order),
        "out": path.map(|p| p.display().to_string()),
    })
}

fn rejection_value(cert: &Certificate, r: &Rejection) -> Value {
    json!({
        "index": r.index,
        "clause": r.clause.name(),
        "detail": r.detail,
        "step": cert.steps.get(r.index).map(|s| json!({
            "step": s.kind.name(),
            "m": s.m,
            "k": s.k,
            "w": chain_to_value(&s.w),
            "literal": s.w.to_string(),
        })),
    })
}

/// Replays `cert` against `oracle` and builds the verification report.
pub fn verify_report(cert: &Certificate, oracle: &Oracle) -> Outcome {
    let mut report = json!({
        "n": cert.n,
        "max_dim": cert.max_dim,
        "steps": cert.steps.len(),
        "join_order": join_order_name(cert.join_order),
        "oracle_certified": oracle.certified(),
    });
    match replay(cert, oracle) {
        Err(r) => {
            report["result"] = json!("rejected");
            report["rejection"] = rejection_value(cert, &r);
            Outcome::failed(report)
        }
        Ok((_, rep)) => {
            report["horn_fills"] = json!(rep.horn_fills);
            report["thin_extensions"] = json!(rep.thin_extensions);
            report["counts"] = json!(rep.counts);
            report["oracle_counts"] = json!(rep.oracle_counts);
            report["verified_through"] = json!(rep.verified_through);
            let ok = rep.complete() && oracle.certified();
            report["message"] = json!(match rep.verified_through {
                Some(d) if ok => format!("verified through dim {d}"),
                None if ok => "replay legal; no dimension below the cutoff to compare".to_string(),
                _ => "final state differs from the oracle".to_string(),
            });
            if !rep.missing.is_empty() || !rep.extra.is_empty() {
                report["missing"] = json!(rep.missing.iter().take(20).map(|x| x.to_string()).collect::<Vec<_>>());
                report["extra"] = json!(rep.extra.iter().take(20).map(|x| x.to_string()).collect::<Vec<_>>());
            }
            if ok {
                report["result"] = json!("verified");
                Outcome::ok(report)
            } else {
                report["result"] = json!("incomplete");
                Outcome::failed(report)
            }
        }
    }
}

fn verify(
    n: Option<usize>,
    max_dim: Option<usize>,
    bound: i64,
    jobs: usize,
    path: &Path,
    stdin: &mut dyn Read,
) -> Outcome {
    if let Err(o) = validate_bound(bound) {
        return o;
    }
    let parsed = if path == Path::new("-") {
        read_certificate(BufReader::new(stdin))
    } else {
        match File::open(path) {
            Ok(f) => read_certificate(BufReader::new(f)),
            Err(e) => return Outcome::invalid(format!("cannot open {}: {e}", path.display())),
        }
    };
    let cert = match parsed {
        Ok(c) => c,
        Err(e) => return Outcome::invalid(format!("malformed certificate: {e}")),
    };
    if n.is_some_and(|n| n != cert.n) || max_dim.is_some_and(|m| m != cert.max_dim) {
        return Outcome::invalid(format!(
            "certificate header has n = {}, max_dim = {}",
            cert.n, cert.max_dim
        ));
    }
    if let Err(o) = validate_run(cert.n, cert.max_dim, bound) {
        return o;
    }
    let oracle = match enumerate_parallel(cert.max_dim.saturating_sub(1), cert.n, bound, jobs) {
        Ok(o) => o,
        Err(e) => return Outcome::internal(e.to_string()),
    };
    let mut out = verify_report(&cert, &oracle);
    out.report["command"] = json!("verify");
    out
}

fn theorem(run: &RunArgs, out: Option<&Path>) -> Outcome {
    if let Err(o) = validate_run(run.n, run.max_dim, run.bound) {
        return o;
    }
    let oracles = match oracles(run.n, run.max_dim, run.bound, run.jobs) {
        Ok(o) => o,
        Err(o) => return o,
    };
    let cert = match generate_certificate_with(&oracles, run.max_dim) {
        Ok(c) => c,
        Err(e) => return Outcome::failed(json!({"error": "generation failed", "message": e.to_string()})),
    };
    if let Some(path) = out {
        if let Err(o) = write_to(path, &cert) {
            return o;
        }
    }
    let mut outcome = verify_report(&cert, &oracles[run.n]);
    outcome.report["command"] = json!("theorem");
    if run.n >= 1 {
        match verify_a_join_structure(&oracles[run.n], &oracles[run.n - 1]) {
            Ok(j) => {
                outcome.report["a_structure"] = json!({
                    "ok": j.ok(),
                    "base": j.base,
                    "cones": j.cones,
                    "total": j.total,
                    "failures": j.failures,
                });
                if !j.ok() && outcome.code == 0 {
                    outcome.code = 1;
                    outcome.report["result"] = json!("incomplete");
                }
            }
            Err(e) => return Outcome::internal(e.to_string()),
        }
    }
    outcome
}
