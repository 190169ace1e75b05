//! `6! m!/(m+7)! ≥ 45/(2^17 m^7)` in exact rational arithmetic.

use wp_oracle::{beta_integral_exact, beta_lower_bound};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for m in [1, 2, 10, 100, 1000] {
        let lhs = beta_integral_exact(m)?;
        let rhs = beta_lower_bound(m)?;
        println!("m = {m:>4}: {:.6e} >= {:.6e}  ({})", lhs.to_f64(), rhs.to_f64(), lhs.as_ratio() >= rhs.as_ratio());
    }
    let suite = wp_curvature::agreement::beta_agreement(1000)?;
    println!("all m in 1..=1000: {}", if suite.pass { "pass" } else { "fail" });
    Ok(())
}
