//! `D(μ_a μ̄_b)` by the polynomial recurrence, the radial ODE and the Green
//! kernel, sampled along a radius.

use num_complex::Complex64;
use wp_curvature::disk::HarmonicForm;
use wp_curvature::resolvent::{Resolvent, Route};

fn main() -> wp_curvature::Result<()> {
    let f = HarmonicForm::basis(2)?.to_separable().mul(&HarmonicForm::basis(1)?.to_separable().conj())?;
    let outputs: Vec<_> = [Route::Exact, Route::Ode, Route::Kernel]
        .iter()
        .map(|&r| Resolvent::with_route(r).apply(&f))
        .collect::<wp_curvature::Result<_>>()?;
    println!("{:>5} {:>22} {:>22} {:>22}", "r", "exact", "ode", "kernel");
    for k in 0..=9 {
        let z = Complex64::new(0.1 * k as f64, 0.0);
        let v: Vec<f64> = outputs.iter().map(|o| o.eval(z).re).collect();
        println!("{:5.2} {:22.15e} {:22.15e} {:22.15e}", z.re, v[0], v[1], v[2]);
    }
    Ok(())
}
