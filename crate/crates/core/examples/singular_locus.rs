// Counts the conditions for a hypersurface to be singular along a curve.
//
// cargo run --example singular_locus

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rcl::curvespace::singular_locus_conditions_rank;
use rcl::{MapParam, PrimeField, DEFAULT_PRIME};

pub fn run_example(seed: u64) -> rcl::Result<Vec<(usize, u32, u32, usize)>> {
    let field = PrimeField::new(DEFAULT_PRIME)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (n, d) in [(2, 2), (4, 3), (6, 4)] {
        for e in [1, 2] {
            let map = MapParam::random_nondegenerate(n, e, field, &mut rng);
            out.push((n, d, e as u32, singular_locus_conditions_rank(&map, d)?));
        }
    }
    Ok(out)
}

fn main() -> rcl::Result<()> {
    for (n, d, e, rank) in run_example(1)? {
        println!("n={n} d={d} degree-{e} curve: {rank} conditions (lines give nd+1 = {})", n as u32 * d + 1);
    }
    Ok(())
}
