//! Report envelope and the text / JSON / CSV renderers.
//!
//! CSV column orders are fixed (see the `*_COLUMNS` constants) and JSON keys
//! are lower_snake_case. JSON output carries no timing information, so equal
//! inputs render to identical bytes.

use serde::Serialize;

use crate::curvespace::VerifyReport;
use crate::error::Result;
use crate::formulas::{DimReport, ScanResult};
use crate::oracle::{CountProfile, FormSource};

pub const TOOL: &str = "rcl";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const FORMULAS_COLUMNS: &[&str] = &[
    "n",
    "d",
    "e",
    "expected_dim_moduli",
    "expected_dim_moduli_raw",
    "expected_fiber_dim",
    "dim_ambient_moduli",
    "obstruction_rank",
    "threshold_degree",
    "codim_s1",
    "singular_line_conditions",
    "codim_sing_curve",
    "codim_se_recursive",
    "codim_se_closed",
    "boundary_dim_smooth",
    "boundary_dim_singular",
    "multiple_cover_dims",
    "inconsistent",
];

pub const VERIFY_COLUMNS: &[&str] = &[
    "attempt",
    "prime",
    "trial",
    "seed",
    "rank",
    "local_dim",
    "chart",
    "passed",
    "invariant_violated",
    "anomaly",
    "error",
];

pub const SCAN_COLUMNS: &[&str] = &["kind", "n", "d", "e", "detail"];

pub const ORACLE_COLUMNS: &[&str] = &["prime", "count", "form"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct FormulasResult {
    pub reports: Vec<DimReport>,
    pub inconsistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub source: FormSource,
    pub budget: u64,
    pub profile: CountProfile,
    pub expected_cone_dim: i64,
    pub slope: Option<f64>,
    pub low_signal: Option<bool>,
    pub tolerance: f64,
    pub within_tolerance: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum CommandResult {
    Formulas(FormulasResult),
    Verify(VerifyReport),
    Scan(ScanResult),
    Oracle(OracleResult),
}

/// Everything a report carries besides the command result.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub prime: Option<u64>,
    pub trials: Option<usize>,
    pub chart_choices: Vec<usize>,
    pub params: serde_json::Value,
    pub exit_code: i32,
    pub result: CommandResult,
}

pub fn render(env: &Envelope, format: Format, elapsed_secs: Option<f64>) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(env)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => render_csv(env),
        Format::Text => Ok(render_text(env, elapsed_secs)),
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn render_csv(env: &Envelope) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match &env.result {
        CommandResult::Formulas(r) => {
            w.write_record(FORMULAS_COLUMNS)?;
            for d in &r.reports {
                let covers: Vec<String> = d
                    .multiple_cover_dims
                    .iter()
                    .map(|c| format!("{}:{}", c.k, c.dim))
                    .collect();
                w.write_record([
                    d.n.to_string(),
                    d.d.to_string(),
                    d.e.to_string(),
                    d.expected_dim_moduli.to_string(),
                    d.expected_dim_moduli_raw.to_string(),
                    d.expected_fiber_dim.to_string(),
                    d.dim_ambient_moduli.to_string(),
                    d.obstruction_rank.to_string(),
                    opt(d.threshold_degree),
                    opt(d.codim_s1),
                    d.singular_line_conditions.to_string(),
                    d.codim_sing_curve.to_string(),
                    opt(d.codim_se_recursive),
                    opt(d.codim_se_closed),
                    d.boundary_dim_smooth.to_string(),
                    d.boundary_dim_singular.to_string(),
                    covers.join(";"),
                    d.inconsistent().to_string(),
                ])?;
            }
        }
        CommandResult::Verify(r) => {
            w.write_record(VERIFY_COLUMNS)?;
            for (a, attempt) in r.attempts.iter().enumerate() {
                for o in &attempt.outcomes {
                    w.write_record([
                        a.to_string(),
                        attempt.prime.to_string(),
                        o.trial.to_string(),
                        o.seed.to_string(),
                        opt(o.rank),
                        opt(o.local_dim),
                        opt(o.chart),
                        o.passed.to_string(),
                        o.invariant_violated.to_string(),
                        o.anomaly.to_string(),
                        o.error.clone().unwrap_or_default(),
                    ])?;
                }
            }
        }
        CommandResult::Scan(r) => {
            w.write_record(SCAN_COLUMNS)?;
            for v in &r.violations {
                let kind = serde_json::to_value(v.kind)?;
                w.write_record([
                    kind.as_str().unwrap_or_default().to_string(),
                    v.n.to_string(),
                    v.d.to_string(),
                    opt(v.e),
                    v.detail.clone(),
                ])?;
            }
        }
        CommandResult::Oracle(r) => {
            w.write_record(ORACLE_COLUMNS)?;
            for c in &r.profile.entries {
                w.write_record([c.prime.to_string(), c.count.to_string(), c.form.clone()])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn render_text(env: &Envelope, elapsed_secs: Option<f64>) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!(
        "{} {} {}  seed={}{}",
        env.tool,
        env.version,
        env.command,
        env.seed,
        env.prime.map(|p| format!(" prime={p}")).unwrap_or_default()
    ));
    match &env.result {
        CommandResult::Formulas(r) => {
            line(format!(
                "{:>3} {:>3} {:>3} {:>8} {:>8} {:>8} {:>6} {:>6} {:>6} {:>9} {:>9}",
                "n", "d", "e", "exp_dim", "fiber", "ambient", "ed+1", "thresh", "S1", "codim_rec", "codim_cl"
            ));
            for d in &r.reports {
                line(format!(
                    "{:>3} {:>3} {:>3} {:>8} {:>8} {:>8} {:>6} {:>6} {:>6} {:>9} {:>9}{}",
                    d.n,
                    d.d,
                    d.e,
                    d.expected_dim_moduli,
                    d.expected_fiber_dim,
                    d.dim_ambient_moduli,
                    d.obstruction_rank,
                    opt_dash(d.threshold_degree),
                    opt_dash(d.codim_s1),
                    opt_dash(d.codim_se_recursive),
                    opt_dash(d.codim_se_closed),
                    if d.inconsistent() { "  INCONSISTENT" } else { "" }
                ));
            }
        }
        CommandResult::Verify(r) => {
            for a in &r.attempts {
                line(format!(
                    "check={} n={} d={} e={} prime={} trials={} expected_rank={}{}",
                    a.check.name(),
                    a.n,
                    a.d,
                    a.e,
                    a.prime,
                    a.trials,
                    a.expected_rank,
                    a.expected_dim.map(|x| format!(" expected_dim={x}")).unwrap_or_default()
                ));
                for o in &a.outcomes {
                    line(format!(
                        "  trial {:>3} seed {:>20} rank {:>5} dim {:>5} {}{}",
                        o.trial,
                        o.seed,
                        opt_dash(o.rank),
                        opt_dash(o.local_dim),
                        if o.passed { "ok" } else { "FAIL" },
                        o.error.as_ref().map(|e| format!(" ({e})")).unwrap_or_default()
                    ));
                }
                line(format!(
                    "  passed {}/{} (threshold {}), invariant {}, anomalies {}",
                    a.pass_count,
                    a.trials,
                    a.pass_threshold,
                    if a.invariant_ok { "ok" } else { "VIOLATED" },
                    a.anomalies.len()
                ));
            }
            line(format!("verdict: {}", if r.verdict { "PASS" } else { "FAIL" }));
        }
        CommandResult::Scan(r) => {
            line(format!(
                "scanned {} cases with n <= {}, {} violations",
                r.cases_scanned,
                r.n_max,
                r.violations.len()
            ));
            for v in &r.violations {
                line(format!("  {:?} n={} d={} e={} {}", v.kind, v.n, v.d, opt_dash(v.e), v.detail));
            }
        }
        CommandResult::Oracle(r) => {
            for c in &r.profile.entries {
                line(format!("  q={:>3} count={:>10}  F = {}", c.prime, c.count, c.form));
            }
            line(format!(
                "slope {} vs expected cone dimension {} (tolerance {}){}",
                r.slope.map(|s| format!("{s:.4}")).unwrap_or_else(|| "-".into()),
                r.expected_cone_dim,
                r.tolerance,
                if r.low_signal == Some(true) { " [low signal]" } else { "" }
            ));
        }
    }
    if let Some(t) = elapsed_secs {
        line(format!("elapsed {t:.3}s"));
    }
    out
}

fn opt_dash<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}
