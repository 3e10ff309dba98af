use std::fmt::Write;

use anyhow::anyhow;
use clap::Args;
use cyclofactor_core::arith::{gcd, Nat};
use cyclofactor_core::field::prime_power;
use cyclofactor_core::{factor, verify_factorization, Error, Factorization, Limits};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::output::{to_json, Diff};
use crate::{exit_code, oracle_any, Engine, Failure, Format, Outcome};

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Comma-separated prime powers.
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    n_min: u64,
    #[arg(long)]
    n_max: u64,
    /// Also run n divisible by the characteristic.
    #[arg(long)]
    allow_char_power: bool,
    #[arg(long, value_enum, default_value_t = Engine::Both)]
    engine: Engine,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub q: Nat,
    pub n: Nat,
    pub status: Status,
    pub case: Option<String>,
    pub w: Option<Nat>,
    pub total: Option<Nat>,
    pub detail: String,
}

impl Row {
    fn skip(q: Nat, n: Nat, detail: impl Into<String>) -> Self {
        Row { q, n, status: Status::Skip, case: None, w: None, total: None, detail: detail.into() }
    }
}

fn factorize(n: Nat, q: Nat, p: Nat, engine: Engine, lim: &Limits) -> Result<Factorization, Error> {
    match engine {
        Engine::Oracle => oracle_any(n, q, p, lim),
        _ => factor(n, q, lim),
    }
}

fn job(q: Nat, p: Nat, n: Nat, args: &SweepArgs, lim: &Limits) -> Row {
    if gcd(n, q) != 1 && !args.allow_char_power {
        return Row::skip(q, n, "p divides n");
    }
    let fz = match factorize(n, q, p, args.engine, lim) {
        Ok(fz) => fz,
        Err(e) if exit_code(&e) == 3 => return Row::skip(q, n, e.to_string()),
        Err(e) => {
            return Row { q, n, status: Status::Fail, case: None, w: None, total: None, detail: e.to_string() }
        }
    };
    let report = verify_factorization(&fz);
    let mut failures: Vec<String> = report.failures().iter().map(|s| s.to_string()).collect();
    if args.engine == Engine::Both {
        match oracle_any(n, q, p, lim) {
            Ok(oracle) if Diff::between(&fz, &oracle).is_empty() => {}
            Ok(_) => failures.push("oracle agreement".into()),
            Err(e) if exit_code(&e) == 3 => {}
            Err(e) => failures.push(format!("oracle: {e}")),
        }
    }
    let (status, detail) = if failures.is_empty() {
        (Status::Pass, String::new())
    } else {
        (Status::Fail, failures.join(", "))
    };
    Row {
        q,
        n,
        status,
        case: Some(fz.case.tag.name().to_string()),
        w: Some(fz.case.w),
        total: Some(fz.total),
        detail,
    }
}

fn render_text(rows: &[Row]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>6} {:>6}  {:<6} {:<14} {:>4} {:>6}  detail",
        "q", "n", "status", "case", "w", "total"
    );
    for r in rows {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        let opt = |v: Option<Nat>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        let line = format!(
            "{:>6} {:>6}  {:<6} {:<14} {:>4} {:>6}  {}",
            r.q,
            r.n,
            status,
            r.case.as_deref().unwrap_or("-"),
            opt(r.w),
            opt(r.total),
            r.detail
        );
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let _ = writeln!(
        out,
        "pass: {}  fail: {}  skip: {}",
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skip)
    );
    out
}

pub fn run(args: &SweepArgs, lim: &Limits) -> Outcome {
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(Failure::invalid(anyhow!(
            "need 1 <= n-min <= n-max, got {}..={}",
            args.n_min,
            args.n_max
        )));
    }
    let mut qs: Vec<Nat> = args.q.iter().map(|&q| q as Nat).collect();
    qs.sort_unstable();
    qs.dedup();
    let mut jobs = Vec::new();
    for &q in &qs {
        let (p, _) = prime_power(q)?;
        for n in args.n_min..=args.n_max {
            jobs.push((q, p, n as Nat));
        }
    }
    // par_iter keeps input order on collect, so rows come out sorted by (q, n).
    let rows: Vec<Row> = jobs.par_iter().map(|&(q, p, n)| job(q, p, n, args, lim)).collect();
    print!(
        "{}",
        match args.format {
            Format::Json => to_json(&rows),
            Format::Text => render_text(&rows),
        }
    );
    let failed = rows.iter().filter(|r| r.status == Status::Fail).count();
    if failed > 0 {
        return Err(Failure::verification(anyhow!("{failed} sweep rows failed")));
    }
    Ok(())
}
