//! Assembles the curvature operator for `n = 1..=5` and prints the
//! spectral verdicts.

use wp_curvature::spectral::summarize;
use wp_curvature::tensor::{compute_block, TensorCache, TensorComputer};
use wp_curvature::wedge::assemble_matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cache = TensorCache::new(5);
    compute_block(5, &mut cache, &TensorComputer::default(), 0)?;
    println!("{:>2} {:>4} {:>12} {:>12} {:>6} {:>9}", "n", "dim", "lambda_min", "lambda_max", "ker", "expected");
    for n in 1..=5 {
        let s = summarize(&assemble_matrix(n, &cache)?, 1e-9, 1e-7)?;
        println!(
            "{:>2} {:>4} {:>12.6} {:>12.3e} {:>6} {:>9}",
            n, s.dimension, s.lambda_min, s.lambda_max, s.kernel.dimension, s.kernel.expected
        );
    }
    Ok(())
}
