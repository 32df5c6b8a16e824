//! `ramfiltre` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 internal inconsistency, 4 disagreement between the two jump evaluators.

mod args;
mod document;

use std::process::ExitCode;

use clap::Parser;
use ramfiltre::engine::{ClosedForms, Engine, ExponentVariant, JumpQuery};
use ramfiltre::filtration::build_filtration;
use ramfiltre::mutation::{Constants, Mutation};
use ramfiltre::oracle::{exponent_vectors, GridSpec, Oracle, Report, P2_NOTE};
use ramfiltre::{Error, FieldLabel, Prime, RadicalSpec, TameFactor, VClass};
use serde_json::{json, Value};

use args::{Cli, Command, ComputeArgs, FieldArgs, Format, JumpArgs, PathArg, TableArgs, VariantArg, VerifyArgs};

const EXIT_VERIFY: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Jump(a) => jump(a),
        Command::Verify(a) => verify(a),
        Command::Table(a) => table(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}: {e}", e.kind());
            ExitCode::from(match e {
                Error::Domain(_) => EXIT_DOMAIN,
                _ => EXIT_INTERNAL,
            })
        }
    }
}

fn prime(p: u64, assert_p2: bool) -> ramfiltre::Result<Prime> {
    let p = Prime::new(p)?;
    if p.is_two() && assert_p2 {
        eprintln!("note: {P2_NOTE}");
    }
    Ok(p)
}

fn spec_of(a: &FieldArgs) -> ramfiltre::Result<RadicalSpec> {
    let mut spec = RadicalSpec::new(prime(a.p, a.assert_p2)?, a.r, a.s.clone(), a.vclass.into());
    spec.p2_asserted = a.assert_p2;
    Ok(spec)
}

fn compute(a: ComputeArgs) -> ramfiltre::Result<ExitCode> {
    let mut spec = spec_of(&a.field)?;
    if let Some(t) = &a.tame {
        spec.tame = TameFactor::parse(t)?;
    }
    let f = build_filtration(&spec)?;
    let doc = document::document(&f);
    match a.format {
        Format::Json => print!("{}", document::to_json(&doc)),
        Format::Csv => print!("{}", document::to_csv(&doc).map_err(|e| Error::Internal(e.to_string()))?),
        Format::Text => print!("{}", document::to_text(&f)),
    }
    Ok(ExitCode::SUCCESS)
}

fn evaluate(engine: &Engine, q: &JumpQuery, path: PathArg) -> ramfiltre::Result<Result<String, String>> {
    match path {
        PathArg::Rec => Ok(Ok(engine.t_nk_rec(q)?.to_string())),
        PathArg::Closed => Ok(Ok(engine.closed(q)?.to_string())),
        PathArg::Both => {
            let rec = engine.t_nk_rec(q)?;
            match engine.closed(q) {
                Ok(c) if c == rec => Ok(Ok(rec.to_string())),
                Ok(c) => Ok(Err(format!("closed {c} != rec {rec}"))),
                Err(Error::Domain(msg)) => {
                    eprintln!("note: closed forms do not apply ({msg}); value from rec");
                    Ok(Ok(rec.to_string()))
                }
                Err(e) => Ok(Err(format!("closed {}: {e} != rec {rec}", e.kind()))),
            }
        }
    }
}

fn jump(a: JumpArgs) -> ramfiltre::Result<ExitCode> {
    let spec = spec_of(&a.field)?;
    spec.validate()?;
    let q = JumpQuery::new(spec.p.clone(), spec.vclass, spec.full_label(), a.k);
    match evaluate(&Engine::new(), &q, a.path)? {
        Ok(v) => {
            println!("{v}");
            Ok(ExitCode::SUCCESS)
        }
        Err(msg) => {
            eprintln!("path mismatch: {msg}");
            Ok(ExitCode::from(EXIT_MISMATCH))
        }
    }
}

fn grid_of(a: &VerifyArgs) -> ramfiltre::Result<GridSpec> {
    let mut g = GridSpec::preset(&a.grid)?;
    if let Some(ps) = &a.primes {
        g.primes = ps.iter().map(|&p| Prime::new(p)).collect::<ramfiltre::Result<_>>()?;
    }
    if let Some(n) = a.n_max {
        g.n_max = n;
    }
    if let Some(r) = a.r_max {
        g.r_max = r;
    }
    if let Some(vs) = &a.vclasses {
        g.vclasses = vs.iter().map(|&v| v.into()).collect();
    }
    if a.no_tame {
        g.include_tame = false;
    }
    if let Some(s) = a.samples {
        g.herbrand_samples = s;
    }
    if let Some(s) = a.seed {
        g.seed = s;
    }
    Ok(g)
}

fn report_json(g: &GridSpec, queries: usize, report: &Report, max_failures: usize) -> Value {
    let by_check: serde_json::Map<String, Value> = report
        .by_check
        .iter()
        .map(|(name, (run, failed))| (name.clone(), json!({"run": run.to_string(), "failed": failed.to_string()})))
        .collect();
    let failures: Vec<Value> = report
        .failures
        .iter()
        .take(max_failures)
        .map(|f| json!({"check": f.check, "query": f.query, "expected": f.expected, "got": f.got}))
        .collect();
    json!({
        "grid": g.to_string(),
        "queries": queries.to_string(),
        "status": if report.passed() { "PASS" } else { "FAIL" },
        "checks_run": report.checks_run.to_string(),
        "failure_count": report.failures.len().to_string(),
        "by_check": by_check,
        "notes": report.notes,
        "failures": failures,
    })
}

fn verify(a: VerifyArgs) -> ramfiltre::Result<ExitCode> {
    let g = grid_of(&a)?;
    let constants = match &a.mutate {
        None => Constants::EXACT,
        Some(name) => Constants::mutated(Mutation::from_name(name).ok_or_else(|| {
            let names: Vec<&str> = Mutation::ALL.iter().map(|m| m.name()).collect();
            Error::Domain(format!("unknown mutation {name:?} (expected one of {})", names.join(", ")))
        })?),
    };
    let variant = match a.variant {
        VariantArg::Unrolled => ExponentVariant::Unrolled,
        VariantArg::Typeset => ExponentVariant::Typeset,
    };
    let queries = g.query_count();
    if a.format == Format::Text {
        println!("queries {queries}");
        println!("grid {g}");
    }
    if g.is_empty() {
        eprintln!("warning: empty grid, no checks run");
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = a.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let oracle = Oracle::new(constants, variant);
    let report = pool.install(|| oracle.run_all(&g));
    match a.format {
        Format::Text => print!("{}", report.to_text(a.max_failures)),
        Format::Json => print!("{}", document::to_json(&report_json(&g, queries, &report, a.max_failures))),
        Format::Csv => return Err(Error::Domain("verify supports --format text or json".into())),
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFY) })
}

fn table(a: TableArgs) -> ramfiltre::Result<ExitCode> {
    let p = prime(a.p, a.assert_p2)?;
    let vclass: VClass = a.vclass.into();
    if a.n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if p.is_two() && !a.assert_p2 {
        return Err(Error::Domain("p=2 hypothesis not asserted".into()));
    }
    let ks: Vec<usize> = match a.k {
        Some(k) if (1..=a.n + 1).contains(&k) => vec![k],
        Some(k) => return Err(Error::Domain(format!("k={k} outside 1..={}", a.n + 1))),
        None => (1..=a.n + 1).collect(),
    };
    let engine = Engine::new();
    let closed = ClosedForms::new(p.clone());
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    let io = |e: csv::Error| Error::Internal(format!("writing table: {e}"));
    let mut header = vec!["r".to_string()];
    header.extend((1..=a.n).map(|i| format!("s_{i}")));
    header.extend(ks.iter().map(|k| format!("t_{{{},{k}}}", a.n)));
    w.write_record(&header).map_err(io)?;
    for r in 1..=a.rmax {
        for s in exponent_vectors(a.n, r, vclass) {
            let mut row = vec![r.to_string()];
            row.extend(s.iter().map(u32::to_string));
            let label = FieldLabel::new(r, s);
            for &k in &ks {
                if k == 1 && r == 1 {
                    row.push(String::new());
                    continue;
                }
                let q = JumpQuery::new(p.clone(), vclass, label.clone(), k);
                let cell = match a.path {
                    PathArg::Closed => match closed.jump(&q) {
                        Err(Error::Domain(_)) => String::new(),
                        other => other?.to_string(),
                    },
                    path => match evaluate(&engine, &q, path)? {
                        Ok(v) => v,
                        Err(msg) => {
                            eprintln!("path mismatch at {label} k={k}: {msg}");
                            return Ok(ExitCode::from(EXIT_MISMATCH));
                        }
                    },
                };
                row.push(cell);
            }
            w.write_record(&row).map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::Internal(e.to_string()))?;
    Ok(ExitCode::SUCCESS)
}
