//! Direct evaluation of the curvature quadratic form as a sum of disk
//! integrals, with the resolvent applied by nested Green-kernel quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::gauss::Legendre;
use crate::green;
use crate::OracleError;

#[derive(Debug, Clone, Copy)]
pub struct DirectSettings {
    /// Gauss–Legendre points in `x = r²` for the outer integral.
    pub radial_nodes: usize,
    /// Points per panel in the hyperbolic distance.
    pub panel_order: usize,
    /// Radius of the excluded disk around the singular point.
    pub delta: f64,
    pub d_max: f64,
    /// Largest tolerated `|I(δ) - I(δ/2)|` for any inner integral.
    pub settle_tol: f64,
}

impl Default for DirectSettings {
    fn default() -> Self {
        Self { radial_nodes: 48, panel_order: 12, delta: 0.01, d_max: 40.0, settle_tol: 1e-7 }
    }
}

fn amplitude(i: usize) -> f64 {
    let n = (i + 1) as f64;
    0.25 * ((2.0 * n.powi(3) - 2.0 * n) / PI).sqrt()
}

/// `μ_i(w)` for `i = 1..=n`, i.e. `amp_i (1-|w|²)² conj(w)^{i-1}`.
fn basis_values(w: Complex64, amps: &[f64], out: &mut [Complex64]) {
    let s = (1.0 - w.norm_sqr()).powi(2);
    let wc = w.conj();
    let mut pow = Complex64::new(1.0, 0.0);
    for (slot, amp) in out.iter_mut().zip(amps) {
        *slot = pow * (amp * s);
        pow *= wc;
    }
}

/// Four-index moments `∫ D(μ_a μ̄_b) μ_c μ̄_d dA` for all labels `≤ n`.
#[derive(Debug, Clone)]
pub struct DirectOracle {
    pub n: usize,
    moments: Vec<Complex64>,
    /// Largest δ-refinement spread seen over all inner integrals.
    pub settle_spread: f64,
}

struct Panels {
    nodes: Vec<(f64, f64)>,
    inner_panel: Vec<(f64, f64)>,
}

impl DirectOracle {
    pub fn build(n: usize, settings: DirectSettings) -> Result<Self, OracleError> {
        if n == 0 {
            return Err(OracleError::Domain("truncation must be >= 1".into()));
        }
        let amps: Vec<f64> = (1..=n).map(amplitude).collect();
        let gl = Legendre::new(settings.panel_order);
        let panels = Self::panels(&gl, &settings);
        let outer = Legendre::new(settings.radial_nodes);
        let n_theta = 8 * n + 8;

        let mut moments = vec![Complex64::new(0.0, 0.0); n.pow(4)];
        let mut spread_max: f64 = 0.0;
        let mut mu = vec![Complex64::new(0.0, 0.0); n];

        for (x, wx) in outer.on(0.0, 1.0) {
            let r = x.sqrt();
            let (resolved, spread) = Self::resolve_at(r, n, &amps, &panels, &settings)?;
            spread_max = spread_max.max(spread);
            let measure = wx * 2.0 / ((1.0 - x) * (1.0 - x));
            for t in 0..n_theta {
                let theta = 2.0 * PI * t as f64 / n_theta as f64;
                let z = Complex64::from_polar(r, theta);
                basis_values(z, &amps, &mut mu);
                let wt = measure * 2.0 * PI / n_theta as f64;
                for a in 0..n {
                    for b in 0..n {
                        // D(μ_a μ̄_b) at r e^{iθ} picks up the mode phase
                        let m = b as f64 - a as f64;
                        let dv = resolved[a * n + b] * Complex64::from_polar(1.0, m * theta) * wt;
                        for c in 0..n {
                            for d in 0..n {
                                moments[((a * n + b) * n + c) * n + d] += dv * mu[c] * mu[d].conj();
                            }
                        }
                    }
                }
            }
        }
        if spread_max > settings.settle_tol {
            return Err(OracleError::NotConverged { spread: spread_max });
        }
        Ok(Self { n, moments, settle_spread: spread_max })
    }

    fn panels(gl: &Legendre, s: &DirectSettings) -> Panels {
        let mut nodes = Vec::new();
        let mut lo = s.delta;
        while lo < 1.0 {
            let hi = (2.0 * lo).min(1.0);
            nodes.extend(gl.on(lo, hi));
            lo = hi;
        }
        let mut lo = 1.0;
        while lo < s.d_max {
            let hi = (lo + 1.0).min(s.d_max);
            nodes.extend(gl.on(lo, hi));
            lo = hi;
        }
        let inner_panel = gl.on(0.5 * s.delta, s.delta).collect();
        Panels { nodes, inner_panel }
    }

    /// `D(μ_a μ̄_b)(r)` for all pairs, plus the δ-refinement spread.
    fn resolve_at(
        r: f64,
        n: usize,
        amps: &[f64],
        panels: &Panels,
        s: &DirectSettings,
    ) -> Result<(Vec<Complex64>, f64), OracleError> {
        let z = Complex64::new(r, 0.0);
        let mut mu = vec![Complex64::new(0.0, 0.0); n];
        let mut ring = |d: f64, acc: &mut [Complex64]| {
            let tau = (0.5 * d).tanh();
            let n_psi = (32.0 + 4.0 * n as f64 + 24.0 / (1.0 - r * tau)).ceil().min(4096.0) as usize;
            let weight = green::kernel(d) * d.sinh() * 2.0 * PI / n_psi as f64;
            for k in 0..n_psi {
                let zeta = Complex64::from_polar(tau, 2.0 * PI * k as f64 / n_psi as f64);
                let w = (zeta + z) / (Complex64::new(1.0, 0.0) + z.conj() * zeta);
                basis_values(w, amps, &mut mu);
                for a in 0..n {
                    for b in 0..n {
                        acc[a * n + b] += mu[a] * mu[b].conj() * weight;
                    }
                }
            }
        };
        let mut far = vec![Complex64::new(0.0, 0.0); n * n];
        for &(d, w) in &panels.nodes {
            let mut tmp = vec![Complex64::new(0.0, 0.0); n * n];
            ring(d, &mut tmp);
            for (f, t) in far.iter_mut().zip(&tmp) {
                *f += t * w;
            }
        }
        let mut near = vec![Complex64::new(0.0, 0.0); n * n];
        for &(d, w) in &panels.inner_panel {
            let mut tmp = vec![Complex64::new(0.0, 0.0); n * n];
            ring(d, &mut tmp);
            for (f, t) in near.iter_mut().zip(&tmp) {
                *f += t * w;
            }
        }
        basis_values(z, amps, &mut mu);
        let (m1, m2) = (green::local_mass(s.delta), green::local_mass(0.5 * s.delta));
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        let mut spread: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let idx = a * n + b;
                let centre = mu[a] * mu[b].conj();
                let coarse = far[idx] + centre * m1;
                let fine = far[idx] + near[idx] + centre * m2;
                spread = spread.max((fine - coarse).norm());
                out[idx] = (fine * 16.0 - coarse) / 15.0;
            }
        }
        Ok((out, spread))
    }

    /// `∫ D(μ_a μ̄_b) μ_c μ̄_d dA`, labels starting at 1.
    pub fn moment(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        let n = self.n;
        self.moments[(((a - 1) * n + (b - 1)) * n + (c - 1)) * n + (d - 1)]
    }

    /// Curvature form for coefficient matrices `d` (x∧x plus y∧y part) and
    /// `b` (x∧y part), both `n × n` row-major, via the three integrals
    /// `-4∫D(Im E)Im E`, `-2∬G|E|²`, `2Re∬G E(z,w)E(w,z)` with `E = F + iH`.
    pub fn quadratic_form(&self, d: &[f64], b: &[f64]) -> f64 {
        let n = self.n;
        let e: Vec<Complex64> = d.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
        let t = |a: usize, b: usize, c: usize, d: usize| self.moments[((a * n + b) * n + c) * n + d];
        let mut term1 = Complex64::new(0.0, 0.0);
        let mut term2 = Complex64::new(0.0, 0.0);
        let mut term3 = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let e1 = e[i * n + j];
                if e1.norm() == 0.0 {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        let e2 = e[k * n + l];
                        if e2.norm() == 0.0 {
                            continue;
                        }
                        term1 += e1 * e2 * t(i, j, k, l)
                            - e1 * e2.conj() * t(i, j, l, k)
                            - e1.conj() * e2 * t(j, i, k, l)
                            + e1.conj() * e2.conj() * t(j, i, l, k);
                        term2 += e1 * e2.conj() * t(i, k, l, j);
                        term3 += e1 * e2 * t(i, l, k, j);
                    }
                }
            }
        }
        term1.re - 2.0 * term2.re + 2.0 * term3.re
    }
}

/// Wedge coefficients in the layout (x∧x for i<j, x∧y row-major, y∧y for i<j).
#[derive(Debug, Clone)]
pub struct RawWedge {
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

/// Curvature form of a raw wedge vector. Only `a + c` enters, placed on the
/// strict upper triangle.
pub fn direct_quadratic_form(oracle: &DirectOracle, v: &RawWedge) -> Result<f64, OracleError> {
    let n = v.n;
    let pairs = n * (n - 1) / 2;
    if n != oracle.n || v.a.len() != pairs || v.c.len() != pairs || v.b.len() != n * n {
        return Err(OracleError::Domain("wedge vector does not match the oracle truncation".into()));
    }
    let mut d = vec![0.0; n * n];
    let mut idx = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            d[i * n + j] = v.a[idx] + v.c[idx];
            idx += 1;
        }
    }
    Ok(oracle.quadratic_form(&d, &v.b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_xy_pair_matches_closed_form() {
        let oracle = DirectOracle::build(1, DirectSettings::default()).unwrap();
        let t1111 = 11.0 / (60.0 * PI);
        assert!((oracle.moment(1, 1, 1, 1).re - t1111).abs() < 1e-8);
        let v = RawWedge { n: 1, a: vec![], b: vec![1.0], c: vec![] };
        let q = direct_quadratic_form(&oracle, &v).unwrap();
        assert!((q + 8.0 * t1111).abs() < 1e-7, "{q}");
    }

    #[test]
    fn zero_vector() {
        let oracle = DirectOracle::build(1, DirectSettings::default()).unwrap();
        let v = RawWedge { n: 1, a: vec![], b: vec![0.0], c: vec![] };
        assert_eq!(direct_quadratic_form(&oracle, &v).unwrap(), 0.0);
    }
}
