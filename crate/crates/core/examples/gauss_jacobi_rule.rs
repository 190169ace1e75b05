//! Gauss-Jacobi rule on `[0,1]` with weight `(1-x)^α`, checked on the beta
//! integral `∫ x^m (1-x)^α dx`.

use wp_curvature::quadrature::QuadratureRule;

fn main() -> wp_curvature::Result<()> {
    let rule = QuadratureRule::gauss_jacobi(12, 2.0)?;
    for m in [0, 5, 11, 23] {
        let q = rule.integrate(|x| x.powi(m));
        // B(m+1, 3) = 2 / ((m+1)(m+2)(m+3))
        let exact = 2.0 / ((m + 1) * (m + 2) * (m + 3)) as f64;
        println!("m = {m:>2}: quadrature {q:.16e}, exact {exact:.16e}");
    }
    Ok(())
}
