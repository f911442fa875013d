//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rcl::curvespace::{run_suite, sample_incidence, Check, SuiteConfig, SuiteReport};
use rcl::formulas::{self, positivity_scan};
use rcl::oracle::{count_profile, dimension_estimate, symbolic_jacobian_check, FormSource, DEFAULT_BUDGET};
use rcl::seed::derive_seed;
use rcl::{dim_report, PrimeField, ProblemInstance};

const PRIME: u64 = 10007;
const TRIALS: usize = 50;
const PASS_NEEDED: usize = 49;
const CASES: [(u32, u32, u32); 4] = [(4, 3, 2), (5, 3, 2), (6, 4, 3), (7, 5, 2)];

struct Gate {
    failures: usize,
}

impl Gate {
    fn record(&mut self, id: u32, name: &str, outcome: Result<String, String>) {
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL criterion {id} ({name}): {detail}");
            }
        }
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn inst(n: u32, d: u32, e: u32) -> ProblemInstance {
    ProblemInstance::new(n, d, e).unwrap()
}

fn suite(check: Check, (n, d, e): (u32, u32, u32), seed: u64) -> Result<SuiteReport, String> {
    run_suite(&SuiteConfig {
        check,
        inst: inst(n, d, e),
        prime: PRIME,
        trials: TRIALS,
        seed,
        pass_threshold: None,
    })
    .map_err(|e| format!("({n},{d},{e}): {e}"))
}

fn formula_fidelity() -> Result<String, String> {
    for e in 1..=12 {
        let r = dim_report(inst(4, 5, e));
        ensure(r.expected_dim_moduli == 0, format!("(4,5,{e}) expected dim {}", r.expected_dim_moduli))?;
    }
    let r = dim_report(inst(6, 4, 3));
    ensure(r.expected_dim_moduli == 11, format!("(6,4,3) expected dim {}", r.expected_dim_moduli))?;
    ensure(formulas::threshold_degree(5, 3) == Some(2), "threshold(5,3)")?;
    ensure(formulas::codim_s1(6, 4) == Some(10), "codim_s1(6,4)")?;
    ensure(formulas::codim_sing_curve(6, 4, 2) == 8, "codim_sing_curve(6,4,2)")?;
    Ok("quintic threefold zeros e<=12, 11, 2, 10, 8".into())
}

fn recursion_consistency() -> Result<String, String> {
    let start = Instant::now();
    let scan = positivity_scan(60);
    let elapsed = start.elapsed();
    ensure(scan.violations.is_empty(), format!("{} violations, first {:?}", scan.violations.len(), scan.violations.first()))?;
    ensure(elapsed < Duration::from_secs(10), format!("scan took {elapsed:?}"))?;

    // Recheck the admissible range directly against the bounds.
    let mut cases = 0u64;
    for n in 6i64..=60 {
        for d in (n + 2) / 2..=n - 2 {
            let lhs = (n * n + 2 * d + 3) * (n - d + 1);
            ensure(lhs > 3 * n * n + 4 * n + 1, format!("quadratic inequality at ({n},{d})"))?;
            let t = formulas::threshold_degree(n, d).unwrap();
            let bounds = formulas::codim_se_bounds(n, d, t).map_err(|e| e.to_string())?;
            for b in &bounds {
                cases += 1;
                ensure(b.recursive >= b.closed, format!("recursive < closed at ({n},{d},{})", b.e))?;
                ensure(b.closed > 0, format!("closed <= 0 at ({n},{d},{})", b.e))?;
                if b.e == 1 {
                    ensure(b.closed == n * (n - 1) / 2 - n + 1, format!("closed at e=1 mismatch at ({n},{d})"))?;
                }
            }
        }
    }
    ensure(cases == scan.cases_scanned, format!("scan covered {} cases, direct count {cases}", scan.cases_scanned))?;
    Ok(format!("{cases} cases, 0 violations, scan {:.3}s", elapsed.as_secs_f64()))
}

fn obstruction_count() -> Result<String, String> {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (i, case) in CASES.into_iter().enumerate() {
        let (_, d, e) = case;
        let r = suite(Check::Containment, case, 100 + i as u64)?;
        let expected = (e * d + 1) as usize;
        let hits = r.outcomes.iter().filter(|o| o.rank == Some(expected)).count();
        ensure(hits >= PASS_NEEDED, format!("{case:?}: rank {expected} on {hits}/{TRIALS}"))?;
        parts.push(format!("{case:?} {hits}/{TRIALS}"));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("{} in {:.2}s", parts.join(", "), elapsed.as_secs_f64()))
}

fn expected_dimension() -> Result<String, String> {
    let mut parts = Vec::new();
    for (i, case) in CASES.into_iter().enumerate() {
        let (n, d, e) = case;
        let expected = i64::from(e) * (i64::from(n) - i64::from(d) + 1) + i64::from(n) - 4;
        let r = suite(Check::Jacobian, case, 200 + i as u64)?;
        let dims: Vec<i64> = r.outcomes.iter().filter_map(|o| o.local_dim).collect();
        ensure(dims.len() == TRIALS, format!("{case:?}: {} trials errored", TRIALS - dims.len()))?;
        let hits = dims.iter().filter(|&&x| x == expected).count();
        ensure(hits >= PASS_NEEDED, format!("{case:?}: dim {expected} on {hits}/{TRIALS}"))?;
        ensure(dims.iter().all(|&x| x >= expected), format!("{case:?}: local dim below {expected}"))?;
        parts.push(format!("{case:?} dim {expected} {hits}/{TRIALS}"));
    }
    Ok(parts.join(", "))
}

fn evaluation_fiber() -> Result<String, String> {
    let mut parts = Vec::new();
    let cases = CASES.iter().copied().chain([(6, 4, 1), (5, 3, 1), (7, 4, 1)]);
    for (i, case) in cases.enumerate() {
        let (n, d, e) = case;
        let (n, d, e) = (i64::from(n), i64::from(d), i64::from(e));
        let expected_dim = e * (n - d + 1) - 2;
        let expected_rank = (e * d + n) as usize;
        if e == 1 {
            ensure(expected_dim == n - d - 1, "line count identity")?;
        }
        let r = suite(Check::Marked, case, 300 + i as u64)?;
        let hits = r
            .outcomes
            .iter()
            .filter(|o| o.local_dim == Some(expected_dim) && o.rank == Some(expected_rank))
            .count();
        ensure(
            hits >= PASS_NEEDED,
            format!("{case:?}: dim {expected_dim} with rank {expected_rank} on {hits}/{TRIALS}"),
        )?;
        parts.push(format!("{case:?} dim {expected_dim} {hits}/{TRIALS}"));
    }
    Ok(parts.join(", "))
}

fn singular_locus() -> Result<String, String> {
    let mut parts = Vec::new();
    for (i, (n, d)) in [(2u32, 2u32), (4, 3), (6, 4)].into_iter().enumerate() {
        let expected = (n * d + 1) as usize;
        let r = suite(Check::Singular, (n, d, 1), 400 + i as u64)?;
        let exact = r.outcomes.iter().filter(|o| o.rank == Some(expected)).count();
        ensure(exact == TRIALS, format!("lines ({n},{d}): rank {expected} on {exact}/{TRIALS}"))?;
        parts.push(format!("lines ({n},{d}) = {expected}"));
    }
    for (i, (n, d)) in [(4u32, 3u32), (6, 4)].into_iter().enumerate() {
        let bound = (n * d + 1) as usize;
        let r = suite(Check::Singular, (n, d, 2), 500 + i as u64)?;
        let ok = r.outcomes.iter().filter(|o| o.rank.is_some_and(|x| x >= bound)).count();
        ensure(ok == TRIALS, format!("conics ({n},{d}): rank >= {bound} on {ok}/{TRIALS}"))?;
        parts.push(format!("conics ({n},{d}) >= {bound}"));
    }
    Ok(parts.join(", "))
}

fn oracle_agreement() -> Result<String, String> {
    let field = PrimeField::new(PRIME).unwrap();
    for k in 0..10u64 {
        let (n, d, e) = CASES[(k % 4) as usize];
        let pt = sample_incidence(inst(n, d, e), field, derive_seed(700, k), false).map_err(|e| e.to_string())?;
        let check = symbolic_jacobian_check(&pt, 20, derive_seed(701, k)).map_err(|e| e.to_string())?;
        ensure(check.agreed == 20, format!("point {k}: {}/20 directions agree", check.agreed))?;
    }
    let start = Instant::now();
    let profile = count_profile(&FormSource::ThroughCurve, 3, 2, 1, &[3, 5, 7], 7, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let est = dimension_estimate(&profile).map_err(|e| e.to_string())?;
    let expected = (3 + 1) * (1 + 1) - (2 + 1);
    ensure((est.slope - f64::from(expected)).abs() <= 0.5, format!("slope {:.4} vs {expected}", est.slope))?;
    ensure(elapsed < Duration::from_secs(120), format!("enumeration took {elapsed:?}"))?;
    Ok(format!(
        "10 points x 20/20 directions, slope {:.4} vs {expected}, enumeration {:.2}s",
        est.slope,
        elapsed.as_secs_f64()
    ))
}

fn run_json(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rcl"))
        .args(args)
        .args(["--format", "json"])
        .env_remove("RCL_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), format!("{args:?} exited with {:?}", out.status.code()))?;
    Ok(out.stdout)
}

fn reproducibility() -> Result<String, String> {
    let commands: [&[&str]; 6] = [
        &["formulas", "--n", "6", "--d", "4", "--e", "1..3"],
        &["scan", "--n-max", "20"],
        &["verify", "--what", "jacobian", "--n", "6", "--d", "4", "--e", "3", "--seed", "1"],
        &["verify", "--what", "marked", "--n", "6", "--d", "4", "--e", "1", "--seed", "5"],
        &["verify", "--what", "singular", "--n", "2", "--d", "2", "--e", "1", "--seed", "9"],
        &["oracle", "--n", "3", "--d", "2", "--e", "1", "--primes", "3,5,7", "--seed", "7"],
    ];
    for args in commands {
        let a = run_json(args)?;
        let b = run_json(args)?;
        ensure(!a.is_empty() && a == b, format!("{args:?}: outputs differ"))?;
    }
    Ok(format!("{} commands byte-identical across runs", commands.len()))
}

fn main() {
    let mut gate = Gate { failures: 0 };
    gate.record(1, "formula fidelity", formula_fidelity());
    gate.record(2, "recursion/closed-form consistency", recursion_consistency());
    gate.record(3, "obstruction count", obstruction_count());
    gate.record(4, "expected-dimension certification", expected_dimension());
    gate.record(5, "evaluation-fiber certification", evaluation_fiber());
    gate.record(6, "singular-locus counts", singular_locus());
    gate.record(7, "oracle agreement", oracle_agreement());
    gate.record(8, "reproducibility", reproducibility());
    if gate.failures > 0 {
        println!("acceptance: {} criteria failed", gate.failures);
        std::process::exit(1);
    }
    println!("acceptance: all 8 criteria passed");
}
