//! `-Q̃(A_i, A_i)` for the dyadic vectors and the chain of lower bounds.

use wp_curvature::spectral::noncompactness_evidence;
use wp_curvature::tensor::{compute_tuples, diagonal_pair_tuples, TensorCache, TensorComputer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let i_max = 4;
    let top = (1 << (i_max + 1)) - 1;
    let mut cache = TensorCache::new(top as usize);
    compute_tuples(&diagonal_pair_tuples(top), &mut cache, &TensorComputer::default(), 0)?;
    let r = noncompactness_evidence(i_max, &cache)?;
    println!("{:>2} {:>12} {:>12} {:>12} {:>12}", "i", "-Q(A,A)", "D-term", "integral", "cube-sum");
    for v in &r.vectors {
        println!(
            "{:>2} {:>12.6} {:>12.6} {:>12.6} {:>12.4e}",
            v.i, v.neg_q, v.resolvent_term, v.integral_bound, v.cube_sum_bound
        );
    }
    for p in &r.projections {
        println!("span{:?}: eigenvalues {:?}", p.span, p.eigenvalues);
    }
    println!("asymptotic bound {:.4e}; all checks {}", r.asymptotic_bound, if r.pass { "hold" } else { "FAIL" });
    Ok(())
}
