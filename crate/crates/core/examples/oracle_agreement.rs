//! The tensor-based quadratic form against direct double quadrature with
//! the Green kernel, and the three resolvent routes against each other.

use rand::SeedableRng;
use wp_curvature::agreement::{form_agreement, resolvent_agreement};

fn main() -> wp_curvature::Result<()> {
    let r = resolvent_agreement(10)?;
    println!("resolvent routes: max difference {:.3e}", r.max_difference);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let f = form_agreement(3, 20, &mut rng)?;
    for c in &f.cases {
        println!("n={} tensor {:+.12} direct {:+.12} diff {:.1e}", c.n, c.tensor_form, c.direct_form, c.difference);
    }
    Ok(())
}
