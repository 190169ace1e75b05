//! Green kernel `G(d) = c · Q_1(cosh d)` of the resolvent, with `Q_1` the
//! Legendre function of the second kind. The constant `c` is fixed
//! numerically so that the kernel has unit hyperbolic mass, which is the
//! same as requiring `D(1) = 1`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Result, WpError};
use crate::separable::RadialProfile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KernelSettings {
    /// Gauss–Legendre points per distance panel.
    pub panel_order: usize,
    /// Panels shrink geometrically towards the singularity down to `2^{-depth}`.
    pub depth: u32,
    pub d_max: f64,
    pub angular_base: usize,
    pub angular_cap: usize,
}

impl Default for KernelSettings {
    fn default() -> Self {
        Self { panel_order: 12, depth: 40, d_max: 40.0, angular_base: 48, angular_cap: 4096 }
    }
}

/// `Q_1(cosh d)` without cancellation at either end.
pub fn legendre_q1_cosh(d: f64) -> f64 {
    let t = d.cosh();
    if t < 4.0 {
        let s = 2.0 * (0.5 * d).sinh().powi(2);
        // (t/2) ln(1 + 2/s) - 1
        0.5 * t * (2.0 / s).ln_1p() - 1.0
    } else {
        // t artanh(1/t) - 1 = Σ_{k≥1} t^{-2k}/(2k+1)
        let u = (t * t).recip();
        let mut term = u;
        let mut sum = 0.0f64;
        let mut k = 1;
        while term > 1e-20 * sum.max(f64::MIN_POSITIVE) && k < 60 {
            sum += term / (2 * k + 1) as f64;
            term *= u;
            k += 1;
        }
        sum
    }
}

fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for k in 0..n {
        let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..60 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

#[derive(Debug, Clone)]
pub struct GreenKernel {
    settings: KernelSettings,
    normalization: f64,
    /// `(d, tanh(d/2), w · Q_1(cosh d) sinh d)` over all distance nodes.
    nodes: Vec<(f64, f64, f64)>,
}

impl GreenKernel {
    pub fn new(settings: KernelSettings) -> Self {
        let gl = gauss_legendre(settings.panel_order);
        let mut edges = vec![0.0];
        for k in (0..settings.depth).rev() {
            edges.push(0.5f64.powi(k as i32));
        }
        edges[0] = 0.5f64.powi(settings.depth as i32 + 1);
        let mut d = 1.0;
        while d < settings.d_max {
            d = (d + 1.0).min(settings.d_max);
            edges.push(d);
        }
        let mut nodes = Vec::new();
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            for &(x, w) in &gl {
                let dist = 0.5 * (a + b) + 0.5 * (b - a) * x;
                let weight = 0.5 * (b - a) * w * legendre_q1_cosh(dist) * dist.sinh();
                nodes.push((dist, (0.5 * dist).tanh(), weight));
            }
        }
        let mass: f64 = TAU * nodes.iter().map(|n| n.2).sum::<f64>();
        Self { settings, normalization: 1.0 / mass, nodes }
    }

    pub fn settings(&self) -> &KernelSettings {
        &self.settings
    }

    /// The constant `c` in `G = c · Q_1(cosh d)`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn value(&self, d: f64) -> Result<f64> {
        if !(d > 0.0) {
            return Err(WpError::Singular(format!("Green kernel at distance {d}")));
        }
        Ok(self.normalization * legendre_q1_cosh(d))
    }

    /// `∫ G(z, w) dA(w)` evaluated with the same quadrature used by
    /// [`GreenKernel::apply_at`], i.e. `D(1)(z)`.
    pub fn unit_mass(&self, r: f64) -> f64 {
        self.apply_at(&RadialProfile::constant(1.0), 0, r)
    }

    /// `D(g e^{imθ})` at the point `z = r` on the positive real axis; the
    /// value at `r e^{iθ}` is this times `e^{imθ}`.
    pub fn apply_at(&self, profile: &RadialProfile, mode: i32, r: f64) -> f64 {
        let m_abs = mode.unsigned_abs();
        let mf = mode as f64;
        let s = &self.settings;
        let mut total = 0.0;
        for &(_, tau, weight) in &self.nodes {
            let n_psi = (s.angular_base as f64 + 4.0 * mf.abs() + 16.0 / (1.0 - r * tau))
                .ceil()
                .min(s.angular_cap as f64) as usize;
            let mut ring = 0.0;
            for k in 0..n_psi {
                let psi = TAU * k as f64 / n_psi as f64;
                let (sn, cs) = psi.sin_cos();
                // w = (ζ + r) / (1 + r ζ), ζ = τ e^{iψ}
                let (zr, zi) = (tau * cs, tau * sn);
                let (nr, ni) = (zr + r, zi);
                let (dr, di) = (1.0 + r * zr, r * zi);
                let den = dr * dr + di * di;
                let wr = (nr * dr + ni * di) / den;
                let wi = (ni * dr - nr * di) / den;
                let rho = wr.hypot(wi).min(1.0 - 1e-16);
                let g = profile.eval(rho, m_abs);
                ring += if mode == 0 { g } else { g * (mf * wi.atan2(wr)).cos() };
            }
            total += weight * ring * TAU / n_psi as f64;
        }
        self.normalization * total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_one_over_pi() {
        let k = GreenKernel::new(KernelSettings::default());
        assert!((k.normalization() - 1.0 / PI).abs() < 1e-10, "{}", k.normalization());
    }

    #[test]
    fn q1_branches_meet() {
        let d = 4.0f64.acosh();
        let a = legendre_q1_cosh(d * (1.0 - 1e-12));
        let b = legendre_q1_cosh(d * (1.0 + 1e-12));
        assert!((a - b).abs() < 1e-12);
        let t: f64 = 4.0;
        assert!((a - (t * (1.0 / t).atanh() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn kernel_is_positive_and_decreasing() {
        let k = GreenKernel::new(KernelSettings::default());
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let v = k.value(0.05 * i as f64).unwrap();
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
        assert!(k.value(0.0).is_err());
        assert!(k.value(60.0).unwrap() < 1e-50);
    }

    #[test]
    fn constant_maps_to_one() {
        let k = GreenKernel::new(KernelSettings::default());
        for r in [0.0, 0.3, 0.7, 0.95] {
            assert!((k.unit_mass(r) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_closed_form_for_first_basis_square() {
        let k = GreenKernel::new(KernelSettings::default());
        let p = RadialProfile::Polynomial { decay: 4, coeffs: vec![1.0] };
        for r in [0.0, 0.25, 0.5, 0.8, 0.9] {
            let x: f64 = r * r;
            let exact = 2.0 / 9.0 * (1.0 - x).powi(2) * (2.0 - x);
            let got = k.apply_at(&p, 0, r);
            assert!((got - exact).abs() < 1e-9, "r={r}: {got} vs {exact}");
        }
    }
}
