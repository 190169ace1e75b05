//! Gram matrix of the first basis elements and the pointwise Harnack bound.

use num_complex::Complex64;
use wp_curvature::disk::{harnack_constant, sup_norm, wp_norm, HarmonicForm};
use wp_curvature::verification::orthonormality;

fn main() -> wp_curvature::Result<()> {
    let gram = orthonormality(1, 13)?;
    println!("Gram deviation over mu_1..mu_13: {:.3e}", gram.max_deviation);

    let mu = HarmonicForm::from_coeffs(&[(1, Complex64::new(0.6, 0.0)), (3, Complex64::new(0.0, 0.8))])?;
    let (sup, norm) = (sup_norm(&mu)?, wp_norm(&mu)?);
    println!("sup|mu| = {sup:.6}, bound = {:.6}", harnack_constant() * norm);
    let first = HarmonicForm::basis(1)?;
    println!("mu_1 attains the bound: sup = {:.15}, c = {:.15}", sup_norm(&first)?, harnack_constant());
    Ok(())
}
