// Samples curves on random hypersurfaces and certifies the local
// dimension of the space of maps by a rank computation over F_p.
//
// cargo run --example certify_expected_dimension

use rcl::curvespace::{run_suite, Check, SuiteConfig, SuiteReport};
use rcl::{ProblemInstance, DEFAULT_PRIME};

pub fn run_example(trials: usize) -> rcl::Result<Vec<SuiteReport>> {
    [(5, 3, 2), (6, 4, 3)]
        .into_iter()
        .map(|(n, d, e)| {
            run_suite(&SuiteConfig {
                check: Check::Jacobian,
                inst: ProblemInstance::new(n, d, e)?,
                prime: DEFAULT_PRIME,
                trials,
                seed: 2024,
                pass_threshold: None,
            })
        })
        .collect()
}

fn main() -> rcl::Result<()> {
    for r in run_example(50)? {
        println!(
            "(n,d,e) = ({},{},{}): rank {} expected, dim {:?} expected, {}/{} trials agree -> {}",
            r.n,
            r.d,
            r.e,
            r.expected_rank,
            r.expected_dim,
            r.pass_count,
            r.trials,
            if r.verdict { "pass" } else { "fail" }
        );
    }
    Ok(())
}
