//! `ffhyper` command-line front end.
//!
//! Data goes to stdout (JSON unless `--format csv`), diagnostics to stderr.
//! Exit codes: 0 success, 1 usage error, 2 computation error, 3 an audited
//! identity or law check failed.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ffhyper::audit::{self, AuditConfig, Format, Provenance, Status};
use ffhyper::chars::{self, Character};
use ffhyper::curves::{self, Model};
use ffhyper::cyclo::format_rat;
use ffhyper::hyp::{self, HypSpec};
use ffhyper::{ff, Error, Exec, FieldCtx, FieldElement, GroupRingElement, Rat};
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "ffhyper",
    version,
    about = "Exact hypergeometric character sums and curve point counts over finite fields"
)]
struct Cli {
    /// Largest field size accepted.
    #[arg(long, global = true, env = "FFHYP_QMAX", default_value_t = ff::DEFAULT_Q_CAP)]
    cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    r: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Field size, modulus coefficients and generator.
    Field(FieldArgs),
    /// 2F1(phi, phi; eps | lambda).
    Eval2f1 {
        #[command(flatten)]
        field: FieldArgs,
        /// Integer (reduced mod p) or coefficient tuple "c0,c1,...".
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// General series n+1Fn with characters given by generator exponents.
    Evalnfn {
        #[command(flatten)]
        field: FieldArgs,
        /// Top characters as exponents j of chi_j, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        top: String,
        /// Bottom characters, one fewer than the top.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        bottom: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Brute-force point count.
    Count {
        #[command(flatten)]
        field: FieldArgs,
        /// ghuff, huff, weier or edwards.
        #[arg(long)]
        model: String,
        /// First parameter; the coefficient d^2 for edwards.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Two-squares decomposition and 2F1(-1) for a prime.
    Special {
        #[arg(long)]
        p: u64,
    },
    /// Audit identities over all odd prime powers up to --qmax.
    Audit {
        #[arg(
            long = "identity",
            conflicts_with = "all",
            required_unless_present = "all"
        )]
        identities: Vec<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        qmax: u64,
        /// printed, corrected, greene or ono.
        #[arg(long)]
        provenance: Option<String>,
        #[arg(long, default_value = "json")]
        format: String,
        /// Worker threads; 1 runs sequentially.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Jacobi sum J(chi_a, chi_b) and binomial (chi_a choose chi_b).
    Charsum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Character-sum law checks over one field.
    Laws {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonRational(_)
            | Error::DivisionByZero
            | Error::LogOfZero
            | Error::OrderMismatch(..)
            | Error::Output(_) => Failure::Compute(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn field(args: &FieldArgs, cap: u64) -> Result<FieldCtx, Failure> {
    Ok(FieldCtx::with_cap(args.p, args.r, cap)?)
}

/// Integers are reduced into the prime subfield; tuples are coefficients,
/// constant term first.
fn element(ctx: &FieldCtx, text: &str) -> Result<FieldElement, Failure> {
    let bad = || Failure::Usage(format!("cannot parse field element `{text}`"));
    let parts: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [v] => Ok(ctx.from_int(*v)),
        _ => Ok(ctx.from_coeffs(&parts)?),
    }
}

fn characters(ctx: &FieldCtx, text: &str) -> Result<Vec<Character>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map(|j| Character::new(ctx, j))
                .map_err(|_| Failure::Usage(format!("cannot parse character index `{s}`")))
        })
        .collect()
}

#[derive(Serialize)]
#[serde(untagged)]
enum Elem {
    Int(u32),
    Tuple(String),
}

fn elem(ctx: &FieldCtx, x: FieldElement) -> Elem {
    if ctx.is_prime_field() {
        Elem::Int(x.index())
    } else {
        Elem::Tuple(ctx.format_element(x))
    }
}

fn decimal(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Serialize)]
struct FieldOut {
    q: u64,
    p: u64,
    r: u32,
    modulus: Vec<u32>,
    generator: Elem,
}

#[derive(Serialize)]
struct ValueOut {
    q: u64,
    lambda: Elem,
    value: String,
    decimal: f64,
}

#[derive(Serialize)]
struct SeriesOut {
    q: u64,
    top: Vec<u32>,
    bottom: Vec<u32>,
    x: Elem,
    value: String,
    decimal: f64,
}

#[derive(Serialize)]
struct SpecialOut {
    x: Option<u64>,
    y: Option<u64>,
    two_f_one_minus1: String,
}

#[derive(Serialize)]
struct Cyclotomic {
    /// Canonical coefficients mod `Phi_n`, constant term first.
    coefficients: Vec<String>,
    polynomial: String,
    re: f64,
    im: f64,
}

impl From<&GroupRingElement> for Cyclotomic {
    fn from(g: &GroupRingElement) -> Self {
        let z = g.embed();
        Cyclotomic {
            coefficients: g.canonical().iter().map(format_rat).collect(),
            polynomial: g.to_string(),
            re: z.re,
            im: z.im,
        }
    }
}

#[derive(Serialize)]
struct CharsumOut {
    q: u64,
    zeta_order: usize,
    a: u32,
    b: u32,
    jacobi: Cyclotomic,
    binom: Cyclotomic,
}

#[derive(Serialize)]
struct LawOut {
    law: &'static str,
    cases: usize,
    failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_failure: Option<String>,
    status: Status,
}

#[derive(Serialize)]
struct LawsOut {
    q: u64,
    seed: u64,
    laws: Vec<LawOut>,
}

fn json<T: Serialize>(v: &T) -> Result<Vec<u8>, Failure> {
    let mut s = serde_json::to_vec(v).map_err(|e| Failure::Compute(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

fn exec_for(jobs: Option<usize>) -> Exec {
    match jobs {
        Some(1) => Exec::Sequential,
        _ => Exec::default(),
    }
}

#[cfg(feature = "parallel")]
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        Some(0) => Err(Failure::Usage("--jobs must be positive".into())),
        Some(k) if k > 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Failure::Compute(e.to_string())),
        _ => Ok(f()),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        Some(0) => Err(Failure::Usage("--jobs must be positive".into())),
        _ => Ok(f()),
    }
}

/// Output bytes and exit code for one parsed invocation.
fn run(cli: Cli) -> Result<(Vec<u8>, u8), Failure> {
    let cap = cli.cap;
    match cli.command {
        Command::Field(args) => {
            let ctx = field(&args, cap)?;
            let out = FieldOut {
                q: ctx.q(),
                p: ctx.p(),
                r: ctx.r(),
                modulus: ctx.modulus().to_vec(),
                generator: elem(&ctx, ctx.generator()),
            };
            Ok((json(&out)?, 0))
        }
        Command::Eval2f1 {
            field: args,
            lambda,
        } => {
            let ctx = field(&args, cap)?;
            let l = element(&ctx, &lambda)?;
            let v = hyp::two_f_one(&ctx, l);
            let out = ValueOut {
                q: ctx.q(),
                lambda: elem(&ctx, l),
                value: format_rat(&v),
                decimal: decimal(&v),
            };
            Ok((json(&out)?, 0))
        }
        Command::Evalnfn {
            field: args,
            top,
            bottom,
            x,
        } => {
            let ctx = field(&args, cap)?;
            let x = element(&ctx, &x)?;
            let (top, bottom) = (characters(&ctx, &top)?, characters(&ctx, &bottom)?);
            if top.is_empty() {
                return Err(Failure::Usage(
                    "at least one top character is required".into(),
                ));
            }
            let spec = HypSpec::new(top, bottom, x)?;
            let v = hyp::hyp_eval(&ctx, &spec)?;
            let out = SeriesOut {
                q: ctx.q(),
                top: spec.top.iter().map(|c| c.index()).collect(),
                bottom: spec.bottom.iter().map(|c| c.index()).collect(),
                x: elem(&ctx, x),
                value: format_rat(&v),
                decimal: decimal(&v),
            };
            Ok((json(&out)?, 0))
        }
        Command::Count {
            field: args,
            model,
            a,
            b,
        } => {
            let model: Model = model.parse()?;
            let ctx = field(&args, cap)?;
            let a = element(&ctx, &a)?;
            let b = match (model, b) {
                (Model::Edwards, None) => ctx.zero(),
                (_, Some(b)) => element(&ctx, &b)?,
                (_, None) => return Err(Failure::Usage(format!("--b is required for {model}"))),
            };
            Ok((json(&curves::count(&ctx, model, a, b)?)?, 0))
        }
        Command::Special { p } => {
            if !ff::is_prime(p) || p == 2 {
                return Err(Failure::Usage(format!("{p} is not an odd prime")));
            }
            if p > cap {
                return Err(Failure::Usage(format!("p = {p} exceeds the cap {cap}")));
            }
            let ts = hyp::cornacchia(p).ok();
            let out = SpecialOut {
                x: ts.map(|t| t.x),
                y: ts.map(|t| t.y),
                two_f_one_minus1: format_rat(&hyp::ono_value_minus1(p)?),
            };
            Ok((json(&out)?, 0))
        }
        Command::Audit {
            identities,
            all,
            qmax,
            provenance,
            format,
            jobs,
        } => {
            let format: Format = format.parse()?;
            let provenance: Option<Provenance> = provenance.map(|p| p.parse()).transpose()?;
            let cfg = AuditConfig {
                exec: exec_for(jobs),
                q_cap: cap,
                ..AuditConfig::default()
            };
            let reports = if all {
                with_jobs(jobs, || audit::sweep_with(qmax, provenance, &cfg))??
            } else {
                if qmax > cap {
                    return Err(Failure::Usage(format!(
                        "q_max = {qmax} exceeds the cap {cap}"
                    )));
                }
                let ids = identities
                    .iter()
                    .map(|id| audit::lookup(id))
                    .filter(|i| !matches!((i, provenance), (Ok(i), Some(p)) if i.provenance != p))
                    .collect::<Result<Vec<_>, _>>()?;
                let qs = ff::odd_prime_powers(qmax);
                with_jobs(jobs, || audit::audit_many(&ids, &qs, &cfg))??
            };
            let mut out = Vec::new();
            audit::emit(&reports, format, &mut out)?;
            for r in &reports {
                eprintln!(
                    "{:<10} {:<9} {} ({} points, {} failing)",
                    r.identity,
                    r.provenance.name(),
                    r.status.as_str(),
                    r.records.len(),
                    r.failures
                );
            }
            let code = if reports.iter().any(|r| r.status == Status::Fail) {
                3
            } else {
                0
            };
            Ok((out, code))
        }
        Command::Charsum { field: args, a, b } => {
            let ctx = field(&args, cap)?;
            let (a, b) = (Character::new(&ctx, a), Character::new(&ctx, b));
            let out = CharsumOut {
                q: ctx.q(),
                zeta_order: ctx.order(),
                a: a.index(),
                b: b.index(),
                jacobi: Cyclotomic::from(&chars::jacobi(&ctx, a, b)?),
                binom: Cyclotomic::from(&chars::binom(&ctx, a, b)?),
            };
            Ok((json(&out)?, 0))
        }
        Command::Laws { field: args, seed } => {
            let ctx = field(&args, cap)?;
            let checks = chars::laws::run_all(&ctx, seed, Exec::default());
            let laws: Vec<LawOut> = checks
                .into_iter()
                .map(|c| LawOut {
                    status: if c.holds() {
                        Status::Pass
                    } else {
                        Status::Fail
                    },
                    law: c.name,
                    cases: c.cases,
                    failures: c.failures,
                    first_failure: c.first_failure,
                })
                .collect();
            let code = if laws.iter().any(|l| l.status == Status::Fail) {
                3
            } else {
                0
            };
            Ok((
                json(&LawsOut {
                    q: ctx.q(),
                    seed,
                    laws,
                })?,
                code,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(&out).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("Try 'ffhyper --help' for usage.");
            ExitCode::from(1)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
