// Counts maps P^1 -> X over F_q for a few small primes and reads off
// the dimension of the affine cone from the growth rate.
//
// cargo run --example point_count_oracle

use rcl::oracle::{count_profile, dimension_estimate, CountProfile, DimensionEstimate, FormSource, DEFAULT_BUDGET};

pub fn run_example(seed: u64) -> rcl::Result<(CountProfile, DimensionEstimate)> {
    let profile = count_profile(&FormSource::ThroughCurve, 3, 2, 1, &[3, 5, 7], seed, DEFAULT_BUDGET)?;
    let est = dimension_estimate(&profile)?;
    Ok((profile, est))
}

fn main() -> rcl::Result<()> {
    let (profile, est) = run_example(7)?;
    for c in &profile.entries {
        println!("q = {}: {} maps into {}", c.prime, c.count, c.form);
    }
    println!("slope {:.3}, expected {}", est.slope, profile.expected_cone_dim());
    Ok(())
}
