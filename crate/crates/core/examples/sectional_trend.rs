//! Holomorphic sectional values `2 T[n,n,n,n]` for `n = 1..=24`.

use wp_curvature::spectral::holomorphic_sectional_trend;
use wp_curvature::tensor::{compute_tuples, TensorCache, TensorComputer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_max = 24;
    let tuples: Vec<_> = (1..=n_max).map(|k| [k, k, k, k]).collect();
    let mut cache = TensorCache::new(n_max as usize);
    compute_tuples(&tuples, &mut cache, &TensorComputer::default(), 0)?;
    let t = holomorphic_sectional_trend(n_max, &cache)?;
    for (k, v) in t.values.iter().enumerate() {
        println!("{:>3} {:.12e}", k + 1, v);
    }
    println!("positive: {}, strictly decreasing: {}", t.positive, t.strictly_decreasing);
    Ok(())
}
