// Dimension and codimension table for cubic and quartic hypersurfaces.
//
// cargo run --example formula_report

use rcl::{dim_report, DimReport, ProblemInstance};

pub fn run_example() -> rcl::Result<Vec<DimReport>> {
    let mut rows = Vec::new();
    for (n, d) in [(5, 3), (6, 4), (4, 5)] {
        for e in 1..=3 {
            rows.push(dim_report(ProblemInstance::new(n, d, e)?));
        }
    }
    Ok(rows)
}

fn main() -> rcl::Result<()> {
    println!("  n  d  e  expected  fiber  ambient  S_e(rec)  S_e(closed)");
    for r in run_example()? {
        let show = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
        println!(
            "{:>3}{:>3}{:>3}{:>10}{:>7}{:>9}{:>10}{:>13}",
            r.n,
            r.d,
            r.e,
            r.expected_dim_moduli,
            r.expected_fiber_dim,
            r.dim_ambient_moduli,
            show(r.codim_se_recursive),
            show(r.codim_se_closed)
        );
    }
    Ok(())
}
