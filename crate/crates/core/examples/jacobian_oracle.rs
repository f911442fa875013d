// Cross-checks the assembled Jacobian against dual-number expansion of
// F o (f + eps*delta) along random directions.
//
// cargo run --example jacobian_oracle

use rcl::curvespace::sample_incidence;
use rcl::oracle::{symbolic_jacobian_check, JacobianCheck};
use rcl::{PrimeField, ProblemInstance, DEFAULT_PRIME};

pub fn run_example(points: u64) -> rcl::Result<Vec<JacobianCheck>> {
    let field = PrimeField::new(DEFAULT_PRIME)?;
    let inst = ProblemInstance::new(6, 4, 2)?;
    (0..points)
        .map(|k| {
            let pt = sample_incidence(inst, field, k, false)?;
            symbolic_jacobian_check(&pt, 20, 1000 + k)
        })
        .collect()
}

fn main() -> rcl::Result<()> {
    for (k, check) in run_example(5)?.iter().enumerate() {
        println!("point {k}: {}/{} directions agree", check.agreed, check.trials);
    }
    Ok(())
}
