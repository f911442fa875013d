//! Command-line front end: `formulas`, `verify`, `scan` and `oracle`.
//!
//! Option values are resolved as flag, then `key=value` config file, then
//! defaults. The seed additionally falls back to `RCL_SEED` before the
//! default of 0. Exit codes: 0 pass, 1 verification failure, 2 usage error,
//! 3 resource refusal.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::curvespace::{run_suite, run_suite_with_retry, Check, SuiteConfig, VerifyReport};
use crate::error::{Error, Result};
use crate::field::DEFAULT_PRIME;
use crate::formulas::{dim_report, positivity_scan, ProblemInstance};
use crate::oracle::{count_profile, dimension_estimate, FormSource, DEFAULT_BUDGET};
use crate::report::{self, CommandResult, Envelope, Format, FormulasResult, OracleResult};
use crate::seed::seed_from_env;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

const DEFAULT_TRIALS: usize = 50;
const DEFAULT_N_MAX: u32 = 60;
const DEFAULT_TOLERANCE: f64 = 0.5;

#[derive(Debug, Parser)]
#[command(name = "rcl", version, about = "Rational curves on hypersurfaces: formulas, rank certificates and point counts")]
pub struct Cli {
    /// Line-based key=value file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Base seed (falls back to RCL_SEED, then 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension and codimension table for fixed (n, d) over a range of e.
    Formulas {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        /// `3`, `1..3` or `1..=3` (both ranges inclusive).
        #[arg(long)]
        e: Option<String>,
    },
    /// Randomized rank certification over F_p.
    Verify {
        #[arg(long, value_enum)]
        what: Option<Check>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        e: Option<u32>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        prime: Option<u64>,
        /// Defaults to ceil(49 * trials / 50).
        #[arg(long)]
        pass_threshold: Option<usize>,
        /// Allow dimension verdicts with n < d + 2.
        #[arg(long)]
        allow_outside_range: bool,
        /// Do not retry at a larger prime after a failed verdict.
        #[arg(long)]
        no_retry: bool,
    },
    /// Positivity scan of the codimension bounds for 6 <= n <= n_max.
    Scan {
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Counts maps into a hypersurface over small primes.
    Oracle {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        e: Option<u32>,
        /// Comma-separated list, e.g. `3,5,7`.
        #[arg(long)]
        primes: Option<String>,
        /// Explicit form such as `x0*x1 - x2^2`.
        #[arg(long)]
        form: Option<String>,
        /// How random forms are drawn when --form is absent.
        #[arg(long, value_enum)]
        hypersurface: Option<Hypersurface>,
        #[arg(long)]
        budget: Option<u64>,
        /// Allowed distance between slope and expected cone dimension.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Hypersurface {
    ThroughCurve,
    Uniform,
}

/// A finished command: the report plus where and how to write it.
#[derive(Debug)]
pub struct Invocation {
    pub envelope: Envelope,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub elapsed_secs: f64,
}

/// Entry point for the binary. Never panics on bad input.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli, seed_from_env()) {
        Ok(inv) => match write_invocation(&inv) {
            Ok(()) => inv.envelope.exit_code,
            Err(e) => {
                eprintln!("rcl: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            eprintln!("rcl: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } => EXIT_REFUSED,
        Error::DegenerateMap | Error::NoSolution | Error::InconsistentMarking(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

fn write_invocation(inv: &Invocation) -> Result<()> {
    let elapsed = (inv.format == Format::Text).then_some(inv.elapsed_secs);
    let text = report::render(&inv.envelope, inv.format, elapsed)?;
    match &inv.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs a parsed command. `env_seed` is the `RCL_SEED` fallback.
pub fn execute(cli: Cli, env_seed: Option<u64>) -> Result<Invocation> {
    let start = Instant::now();
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let format = pick(cli.format, &cfg, "format")?.unwrap_or(Format::Text);
    let output = cli.output.clone().or_else(|| cfg.get("output").map(PathBuf::from));
    let seed = pick(cli.seed, &cfg, "seed")?.or(env_seed).unwrap_or(0);

    let envelope = match cli.command {
        Command::Formulas { n, d, e } => {
            let n = required(n, &cfg, "n")?;
            let d = required(d, &cfg, "d")?;
            let e = pick(e, &cfg, "e")?;
            cmd_formulas(n, d, e.as_deref(), seed)?
        }
        Command::Verify {
            what,
            n,
            d,
            e,
            trials,
            prime,
            pass_threshold,
            allow_outside_range,
            no_retry,
        } => {
            let args = VerifyArgs {
                check: required(what, &cfg, "what")?,
                inst: ProblemInstance::new(
                    required(n, &cfg, "n")?,
                    required(d, &cfg, "d")?,
                    required(e, &cfg, "e")?,
                )?,
                trials: pick(trials, &cfg, "trials")?.unwrap_or(DEFAULT_TRIALS),
                prime: pick(prime, &cfg, "prime")?.unwrap_or(DEFAULT_PRIME),
                pass_threshold: pick(pass_threshold, &cfg, "pass_threshold")?,
                allow_outside_range: allow_outside_range || flag(&cfg, "allow_outside_range")?,
                retry: !(no_retry || flag(&cfg, "no_retry")?),
                seed,
            };
            cmd_verify(&args)?
        }
        Command::Scan { n_max } => {
            cmd_scan(pick(n_max, &cfg, "n_max")?.unwrap_or(DEFAULT_N_MAX), seed)
        }
        Command::Oracle {
            n,
            d,
            e,
            primes,
            form,
            hypersurface,
            budget,
            tolerance,
        } => {
            let form: Option<String> = pick(form, &cfg, "form")?;
            let source = match form {
                Some(text) => FormSource::Explicit(text),
                None => match pick(hypersurface, &cfg, "hypersurface")?.unwrap_or(Hypersurface::ThroughCurve) {
                    Hypersurface::ThroughCurve => FormSource::ThroughCurve,
                    Hypersurface::Uniform => FormSource::Uniform,
                },
            };
            let primes: String = required(primes, &cfg, "primes")?;
            let args = OracleArgs {
                inst: ProblemInstance::new(
                    required(n, &cfg, "n")?,
                    required(d, &cfg, "d")?,
                    required(e, &cfg, "e")?,
                )?,
                primes: parse_primes(&primes)?,
                source,
                budget: pick(budget, &cfg, "budget")?.unwrap_or(DEFAULT_BUDGET),
                tolerance: pick(tolerance, &cfg, "tolerance")?.unwrap_or(DEFAULT_TOLERANCE),
                seed,
            };
            cmd_oracle(&args)?
        }
    };
    Ok(Invocation {
        envelope,
        format,
        output,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// Parsed `key=value` lines. Blank lines and `#` comments are skipped;
/// dashes in keys are treated as underscores.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
            values.insert(k.trim().replace('-', "_"), v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

trait ConfigValue: Sized {
    fn from_config(s: &str) -> std::result::Result<Self, String>;
}

macro_rules! from_str_config {
    ($($t:ty),*) => {$(
        impl ConfigValue for $t {
            fn from_config(s: &str) -> std::result::Result<Self, String> {
                <$t as FromStr>::from_str(s).map_err(|e| e.to_string())
            }
        }
    )*};
}

from_str_config!(u32, u64, usize, f64, String, bool);

macro_rules! value_enum_config {
    ($($t:ty),*) => {$(
        impl ConfigValue for $t {
            fn from_config(s: &str) -> std::result::Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    )*};
}

value_enum_config!(Format, Check, Hypersurface);

fn pick<T: ConfigValue>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> Result<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    cfg.get(key)
        .map(|s| T::from_config(s).map_err(|e| Error::Usage(format!("config key {key}: {e}"))))
        .transpose()
}

fn required<T: ConfigValue>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> Result<T> {
    pick(flag, cfg, key)?.ok_or_else(|| Error::Usage(format!("missing required option --{}", key.replace('_', "-"))))
}

fn flag(cfg: &ConfigFile, key: &str) -> Result<bool> {
    Ok(pick(None, cfg, key)?.unwrap_or(false))
}

/// Parses `3`, `1..3` or `1..=3`; ranges are inclusive.
pub fn parse_e_range(text: &str) -> Result<(u32, u32)> {
    let bad = || Error::Usage(format!("invalid e range {text:?}"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(text)?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn parse_primes(text: &str) -> Result<Vec<u64>> {
    let primes: Vec<u64> = text
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| Error::Usage(format!("invalid prime list {text:?}"))))
        .collect::<Result<_>>()?;
    if primes.is_empty() {
        return Err(Error::Usage("empty prime list".into()));
    }
    for &q in &primes {
        if !crate::field::is_prime(q) {
            return Err(Error::Usage(format!("{q} is not prime")));
        }
    }
    Ok(primes)
}

#[allow(clippy::too_many_arguments)]
fn envelope(
    command: &'static str,
    seed: u64,
    prime: Option<u64>,
    trials: Option<usize>,
    chart_choices: Vec<usize>,
    params: serde_json::Value,
    exit_code: i32,
    result: CommandResult,
) -> Envelope {
    Envelope {
        tool: report::TOOL,
        version: report::VERSION,
        command,
        seed,
        prime,
        trials,
        chart_choices,
        params,
        exit_code,
        result,
    }
}

pub fn cmd_formulas(n: u32, d: u32, e_range: Option<&str>, seed: u64) -> Result<Envelope> {
    ProblemInstance::new(n, d, 1)?;
    let (lo, hi) = match e_range {
        Some(text) => parse_e_range(text)?,
        None => {
            let t = crate::formulas::threshold_degree(i64::from(n), i64::from(d)).unwrap_or(1).max(1);
            let t = u32::try_from(t).unwrap_or(1);
            (1, t)
        }
    };
    let reports: Vec<_> = (lo..=hi)
        .map(|e| ProblemInstance::new(n, d, e).map(dim_report))
        .collect::<Result<_>>()?;
    let inconsistent = reports.iter().any(|r| r.inconsistent());
    Ok(envelope(
        "formulas",
        seed,
        None,
        None,
        Vec::new(),
        json!({ "n": n, "d": d, "e_min": lo, "e_max": hi }),
        if inconsistent { EXIT_FAIL } else { EXIT_PASS },
        CommandResult::Formulas(FormulasResult { reports, inconsistent }),
    ))
}

#[derive(Debug, Clone)]
pub struct VerifyArgs {
    pub check: Check,
    pub inst: ProblemInstance,
    pub trials: usize,
    pub prime: u64,
    pub pass_threshold: Option<usize>,
    pub allow_outside_range: bool,
    pub retry: bool,
    pub seed: u64,
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Envelope> {
    let ProblemInstance { n, d, e } = args.inst;
    let dimension_verdict = matches!(args.check, Check::Jacobian | Check::Marked);
    if dimension_verdict && !args.allow_outside_range && n < d + 2 {
        return Err(Error::Usage(format!(
            "dimension verdicts need n >= d + 2 (got n={n}, d={d}); pass --allow-outside-range to explore"
        )));
    }
    if args.trials == 0 {
        return Err(Error::Usage("--trials must be positive".into()));
    }
    if let Some(t) = args.pass_threshold {
        if t > args.trials {
            return Err(Error::Usage(format!("pass threshold {t} exceeds trial count {}", args.trials)));
        }
    }
    let cfg = SuiteConfig {
        check: args.check,
        inst: args.inst,
        prime: args.prime,
        trials: args.trials,
        seed: args.seed,
        pass_threshold: args.pass_threshold,
    };
    let report = if args.retry {
        run_suite_with_retry(&cfg)?
    } else {
        let attempt = run_suite(&cfg)?;
        VerifyReport {
            verdict: attempt.verdict,
            attempts: vec![attempt],
            retried: false,
        }
    };
    let last = report.attempts.last().expect("at least one attempt");
    let chart_choices = last.outcomes.iter().filter_map(|o| o.chart).collect();
    Ok(envelope(
        "verify",
        args.seed,
        Some(last.prime),
        Some(args.trials),
        chart_choices,
        json!({
            "what": args.check.name(),
            "n": n,
            "d": d,
            "e": e,
            "requested_prime": args.prime,
            "pass_threshold": last.pass_threshold,
            "allow_outside_range": args.allow_outside_range,
            "retry": args.retry,
        }),
        if report.verdict { EXIT_PASS } else { EXIT_FAIL },
        CommandResult::Verify(report),
    ))
}

pub fn cmd_scan(n_max: u32, seed: u64) -> Envelope {
    let result = positivity_scan(i64::from(n_max));
    let code = if result.violations.is_empty() { EXIT_PASS } else { EXIT_FAIL };
    envelope(
        "scan",
        seed,
        None,
        None,
        Vec::new(),
        json!({ "n_max": n_max }),
        code,
        CommandResult::Scan(result),
    )
}

#[derive(Debug, Clone)]
pub struct OracleArgs {
    pub inst: ProblemInstance,
    pub primes: Vec<u64>,
    pub source: FormSource,
    pub budget: u64,
    pub tolerance: f64,
    pub seed: u64,
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<Envelope> {
    let ProblemInstance { n, d, e } = args.inst;
    let profile = count_profile(
        &args.source,
        n as usize,
        d,
        e as usize,
        &args.primes,
        args.seed,
        args.budget,
    )?;
    let expected = profile.expected_cone_dim();
    let estimate = match dimension_estimate(&profile) {
        Ok(est) => Some(est),
        Err(Error::InsufficientPrimes(_)) => None,
        Err(e) => return Err(e),
    };
    let within = estimate.map(|est| (est.slope - expected as f64).abs() <= args.tolerance);
    let code = if within == Some(false) { EXIT_FAIL } else { EXIT_PASS };
    Ok(envelope(
        "oracle",
        args.seed,
        None,
        None,
        Vec::new(),
        json!({
            "n": n,
            "d": d,
            "e": e,
            "primes": args.primes,
            "budget": args.budget,
            "tolerance": args.tolerance,
        }),
        code,
        CommandResult::Oracle(OracleResult {
            source: args.source.clone(),
            budget: args.budget,
            profile,
            expected_cone_dim: expected,
            slope: estimate.map(|x| x.slope),
            low_signal: estimate.map(|x| x.low_signal),
            tolerance: args.tolerance,
            within_tolerance: within,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_ranges() {
        assert_eq!(parse_e_range("3").unwrap(), (3, 3));
        assert_eq!(parse_e_range("1..3").unwrap(), (1, 3));
        assert_eq!(parse_e_range("1..=12").unwrap(), (1, 12));
        assert!(parse_e_range("0..2").is_err());
        assert!(parse_e_range("3..1").is_err());
        assert!(parse_e_range("x").is_err());
    }

    #[test]
    fn config_file_parsing() {
        let cfg = ConfigFile::parse("# batch\nn = 6\nn-max=7 # trailing\n\nformat=json\n").unwrap();
        assert_eq!(cfg.get("n"), Some("6"));
        assert_eq!(cfg.get("n_max"), Some("7"));
        assert_eq!(pick::<Format>(None, &cfg, "format").unwrap(), Some(Format::Json));
        assert_eq!(pick(Some(5u32), &cfg, "n").unwrap(), Some(5));
        assert!(ConfigFile::parse("novalue\n").is_err());
    }

    #[test]
    fn missing_option_is_usage_error() {
        let cli = Cli::try_parse_from(["rcl", "formulas", "--n", "6"]).unwrap();
        let err = execute(cli, None).unwrap_err();
        assert_eq!(exit_code_for(&err), EXIT_USAGE);
    }

    #[test]
    fn seed_precedence() {
        let cli = Cli::try_parse_from(["rcl", "scan", "--n-max", "5"]).unwrap();
        assert_eq!(execute(cli, Some(42)).unwrap().envelope.seed, 42);
        let cli = Cli::try_parse_from(["rcl", "--seed", "3", "scan", "--n-max", "5"]).unwrap();
        assert_eq!(execute(cli, Some(42)).unwrap().envelope.seed, 3);
    }
}
