// Rank and kernel over F_p.
//
// cargo run --example finite_field_linalg

use rcl::{Matrix, PrimeField};

pub fn run_example() -> rcl::Result<(usize, Vec<Vec<u64>>)> {
    let f = PrimeField::new(7)?;
    let a = Matrix::from_i64_rows(f, &[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 5]])?;
    Ok((a.rank(), a.kernel_basis()))
}

fn main() -> rcl::Result<()> {
    let (rank, kernel) = run_example()?;
    println!("rank {rank}");
    for v in kernel {
        println!("kernel vector {v:?}");
    }
    Ok(())
}
