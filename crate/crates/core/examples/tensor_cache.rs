//! Computes the tensor block for `n = 4`, writes the JSONL cache and shows
//! that a reload skips every solve.

use wp_curvature::tensor::{cache_file_name, compute_block, TensorCache, TensorComputer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("wp-example-cache");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join(cache_file_name(4));
    let computer = TensorComputer::default();

    let mut cache = TensorCache::new(4);
    let first = compute_block(4, &mut cache, &computer, 0)?;
    cache.save(&path)?;
    println!("{} canonical entries, {} solved, written to {}", cache.len(), first.new_solves, path.display());

    let mut again = TensorCache::load(&path)?;
    let second = compute_block(4, &mut again, &computer, 0)?;
    println!("reloaded: {} new solves, hash {}", second.new_solves, again.content_hash()?);
    println!("T[1,1,1,1] = {:.16}", again.require([1, 1, 1, 1])?);
    Ok(())
}
