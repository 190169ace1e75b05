//! Green kernel of `-2(Δ-2)^{-1}` on the hyperbolic disk in closed form.

use std::f64::consts::PI;

/// `Q_1(cosh d)/π`, with the Legendre function of the second kind
/// `Q_1(t) = (t/2) ln((t+1)/(t-1)) - 1`.
pub fn kernel(d: f64) -> f64 {
    let s = 2.0 * (0.5 * d).sinh().powi(2); // t - 1
    let t = 1.0 + s;
    let q1 = if t > 8.0 {
        let u = 1.0 / (t * t);
        let mut sum = 0.0;
        let mut pow = u;
        for k in 1..30 {
            sum += pow / (2 * k + 1) as f64;
            pow *= u;
            if pow < 1e-18 {
                break;
            }
        }
        sum
    } else {
        0.5 * t * ((2.0 + s) / s).ln() - 1.0
    };
    q1 / PI
}

/// Kernel mass inside the hyperbolic disk of radius `delta`:
/// `2π ∫_0^δ G(d) sinh d dd`.
pub fn local_mass(delta: f64) -> f64 {
    let s = 2.0 * (0.5 * delta).sinh().powi(2);
    // 2 [ (t²-1)/4 ln((t+1)/(t-1)) - t/2 + 1/2 ], t = 1 + s
    2.0 * (s * (2.0 + s) / 4.0 * ((2.0 + s) / s).ln() - 0.5 * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_agree() {
        // t = 8 switch point: both formulas should match
        let d = (8.0f64).acosh();
        let t: f64 = 8.0;
        let direct = (0.5 * t * ((t + 1.0) / (t - 1.0)).ln() - 1.0) / PI;
        assert!((kernel(d * 1.0000001) - direct).abs() < 1e-9);
    }

    #[test]
    fn local_mass_tends_to_one() {
        // compare with 2π ∫ G sinh on graded panels
        let gl = crate::gauss::Legendre::new(16);
        let mut lo = 0.5f64;
        let mut total = 0.0;
        for _ in 0..60 {
            let a = 0.5 * lo;
            total += gl.on(a, lo).map(|(d, w)| w * kernel(d) * d.sinh()).sum::<f64>();
            lo = a;
        }
        total += gl.on(0.5, 1.0).map(|(d, w)| w * kernel(d) * d.sinh()).sum::<f64>();
        assert!((2.0 * PI * total - local_mass(1.0)).abs() < 1e-12);
        assert!(local_mass(1e-3) > 0.0 && local_mass(1e-3) < 1e-5);
        assert!(local_mass(8.0) < 1.0 && local_mass(8.0) > 0.99);
    }

    #[test]
    fn log_singularity() {
        let d: f64 = 1e-6;
        let approx = -d.ln() / PI;
        assert!((kernel(d) - approx).abs() < 0.5);
    }
}
