// Dimension of the family of curves through a fixed general point.
//
// For lines on a quartic in P^6 the fiber has dimension 1.
//
// cargo run --example evaluation_fiber

use rcl::curvespace::{marked_local_fiber_dim, sample_incidence, FiberCertificate};
use rcl::{PrimeField, ProblemInstance, DEFAULT_PRIME};

type Case = (u32, u32, u32);

pub fn run_example(seed: u64) -> rcl::Result<Vec<(Case, FiberCertificate)>> {
    let field = PrimeField::new(DEFAULT_PRIME)?;
    let mut out = Vec::new();
    for (n, d, e) in [(6, 4, 1), (5, 3, 2), (6, 4, 2)] {
        let pt = sample_incidence(ProblemInstance::new(n, d, e)?, field, seed, true)?;
        out.push(((n, d, e), marked_local_fiber_dim(&pt)?));
    }
    Ok(out)
}

fn main() -> rcl::Result<()> {
    for ((n, d, e), cert) in run_example(3)? {
        println!(
            "({n},{d},{e}): combined rank {} (expected {}), fiber dim {} (expected {}), chart x{}",
            cert.combined_rank, cert.expected_rank, cert.local_dim, cert.expected_dim, cert.chart
        );
    }
    Ok(())
}
