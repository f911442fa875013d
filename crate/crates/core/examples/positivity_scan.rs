// Scans the codimension bounds for 6 <= n <= N (default 60).
//
// cargo run --example positivity_scan -- 40

use rcl::formulas::{positivity_scan, ScanResult};

pub fn run_example(n_max: i64) -> ScanResult {
    positivity_scan(n_max)
}

fn main() {
    let n_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(60);
    let result = run_example(n_max);
    println!("{} cases with n <= {n_max}", result.cases_scanned);
    for v in &result.violations {
        println!("violation {:?} at n={} d={} e={:?}: {}", v.kind, v.n, v.d, v.e, v.detail);
    }
    if result.violations.is_empty() {
        println!("no violations");
    }
}
