//! `cyclofactor`: factor x^n - 1 over F_q from the command line.

mod output;
mod sweep;

use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclofactor_core::arith::{checked_pow, is_prime, Nat};
use cyclofactor_core::{
    count_factors, factor, oracle_factor, verify_factorization, Error, Factorization, Limits,
};

use crate::output::{CountDoc, Diff, FactorDoc};

#[derive(Parser, Debug)]
#[command(name = "cyclofactor", version, about = "Irreducible factorization of x^n - 1 over F_q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor x^n - 1 and verify the result.
    Factor {
        #[command(flatten)]
        job: Job,
        #[arg(long, value_enum, default_value_t = Engine::Explicit)]
        engine: Engine,
    },
    /// Closed-form factor counts, without building any polynomial.
    Count {
        #[command(flatten)]
        job: Job,
    },
    /// Factor x^n - 1 by cyclotomic cosets only.
    Oracle {
        #[command(flatten)]
        job: Job,
    },
    /// Diff the explicit factorization against the oracle.
    Compare {
        #[command(flatten)]
        job: Job,
    },
    /// One pass/fail row per (q, n) over a range of n.
    Sweep(sweep::SweepArgs),
}

#[derive(Args, Debug, Clone)]
struct Job {
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// Extension degree, q = p^s.
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Explicit,
    Oracle,
    Both,
}

/// Failure with an exit status.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    pub fn verification(err: anyhow::Error) -> Self {
        Failure { code: 1, err }
    }

    pub fn invalid(err: anyhow::Error) -> Self {
        Failure { code: 2, err }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = exit_code(&e);
        Failure { code, err: e.into() }
    }
}

/// 1 for internal inconsistencies, 2 for bad input, 3 for resource bounds.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::FieldTooLarge { .. } | Error::Overflow(_) => 3,
        Error::NotInSubfield { .. } | Error::ContextMismatch | Error::DivisionByZero => 1,
        _ => 2,
    }
}

pub type Outcome = Result<(), Failure>;

/// Limits from the environment: `CYCLOFACTOR_FIELD_BOUND` overrides the
/// field-size bound.
fn limits() -> Result<Limits, Failure> {
    let mut lim = Limits::default();
    if let Ok(v) = std::env::var("CYCLOFACTOR_FIELD_BOUND") {
        lim.field_bound = v
            .trim()
            .parse::<Nat>()
            .with_context(|| format!("CYCLOFACTOR_FIELD_BOUND={v:?} is not a nonnegative integer"))
            .map_err(Failure::invalid)?;
    }
    Ok(lim)
}

pub fn field_size(p: u64, s: u32) -> Result<Nat, Failure> {
    if !is_prime(p as Nat) {
        return Err(Failure::invalid(anyhow!("p = {p} is not prime")));
    }
    if s == 0 {
        return Err(Failure::invalid(anyhow!("s must be at least 1")));
    }
    Ok(checked_pow(p as Nat, s)?)
}

impl Job {
    fn q(&self) -> Result<Nat, Failure> {
        let q = field_size(self.p, self.s)?;
        if self.n == 0 {
            return Err(Failure::invalid(anyhow!("n must be at least 1")));
        }
        Ok(q)
    }
}

/// Coset oracle for any `n`: the characteristic part is stripped and put
/// back as a multiplicity, as the explicit engine does.
pub fn oracle_any(n: Nat, q: Nat, p: Nat, lim: &Limits) -> Result<Factorization, Error> {
    let mut n0 = n;
    let mut pe: Nat = 1;
    while n0.is_multiple_of(p) {
        n0 /= p;
        pe *= p;
    }
    let mut fz = oracle_factor(n0, q, lim)?;
    if pe > 1 {
        fz.n = n;
        for f in &mut fz.factors {
            f.multiplicity = pe;
        }
        fz.notes.push(format!("x^{n} - 1 = (x^{n0} - 1)^{pe} in characteristic {p}"));
    }
    Ok(fz)
}

fn engine_name(e: Engine) -> &'static str {
    match e {
        Engine::Explicit => "explicit",
        Engine::Oracle => "oracle",
        Engine::Both => "explicit, checked against oracle",
    }
}

fn run_factor(job: &Job, engine: Engine) -> Outcome {
    let q = job.q()?;
    let lim = limits()?;
    let n = job.n as Nat;
    let fz = match engine {
        Engine::Oracle => oracle_any(n, q, job.p as Nat, &lim)?,
        _ => factor(n, q, &lim)?,
    };
    let report = verify_factorization(&fz);
    let agreement = match engine {
        Engine::Both => Some(Diff::between(&fz, &oracle_any(n, q, job.p as Nat, &lim)?)),
        _ => None,
    };
    let doc = FactorDoc::new(job.p, job.s, &fz, &report);
    print!(
        "{}",
        match job.format {
            Format::Json => output::to_json(&doc),
            Format::Text => output::factor_text(&doc, engine_name(engine), agreement.as_ref()),
        }
    );
    if !report.accepted() {
        return Err(Failure::verification(anyhow!(
            "verification failed: {}",
            report.failures().join(", ")
        )));
    }
    if let Some(d) = agreement.filter(|d| !d.is_empty()) {
        return Err(Failure::verification(anyhow!(
            "explicit and oracle factorizations differ ({} explicit only, {} oracle only)",
            d.only_explicit.len(),
            d.only_oracle.len()
        )));
    }
    Ok(())
}

fn run_count(job: &Job) -> Outcome {
    let q = job.q()?;
    let p = job.p as Nat;
    let mut n0 = job.n as Nat;
    let mut pe: Nat = 1;
    while n0.is_multiple_of(p) {
        n0 /= p;
        pe *= p;
    }
    let count = count_factors(n0, q)?;
    let doc = CountDoc::new(job.p, job.s, q, job.n as Nat, &count, pe);
    print!(
        "{}",
        match job.format {
            Format::Json => output::to_json(&doc),
            Format::Text => output::count_text(&doc),
        }
    );
    Ok(())
}

fn run_compare(job: &Job) -> Outcome {
    let q = job.q()?;
    let lim = limits()?;
    let n = job.n as Nat;
    let explicit = factor(n, q, &lim)?;
    let oracle = oracle_any(n, q, job.p as Nat, &lim)?;
    let diff = Diff::between(&explicit, &oracle);
    print!(
        "{}",
        match job.format {
            Format::Json => output::to_json(&diff.doc(job.p, job.s, &explicit)),
            Format::Text => output::diff_text(&diff, &explicit, job.p, job.s),
        }
    );
    if diff.is_empty() {
        Ok(())
    } else {
        Err(Failure::verification(anyhow!(
            "explicit and oracle factorizations differ"
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Factor { job, engine } => run_factor(job, *engine),
        Command::Count { job } => run_count(job),
        Command::Oracle { job } => run_factor(job, Engine::Oracle),
        Command::Compare { job } => run_compare(job),
        Command::Sweep(args) => limits().and_then(|lim| sweep::run(args, &lim)),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
