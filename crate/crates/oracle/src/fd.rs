//! Finite-difference resolvent on a uniform grid in the stretched
//! coordinate `σ = -ln(1 - r²)`.
//!
//! For a source `f = r^{|m|} S(x) e^{imθ}` (with `x = r²`) the solution is
//! written `u = r^{|m|} h(x) e^{imθ}`, and `(Δ - 2)u = -2f` becomes
//! `x h_σσ + [x + (m+1)(1-x)] h_σ - 2h = -2S`.

use std::f64::consts::PI;

use crate::OracleError;

#[derive(Debug, Clone, Copy)]
pub struct FdGrid {
    pub intervals: usize,
    pub sigma_max: f64,
}

impl FdGrid {
    pub fn new(intervals: usize) -> Self {
        Self { intervals, sigma_max: 20.0 }
    }
}

#[derive(Debug, Clone)]
pub struct FdSolution {
    pub mode: i32,
    pub step: f64,
    /// Reduced solution `h` at `σ_k = k·step`.
    pub reduced: Vec<f64>,
}

/// Solves for the reduced profile. `source` maps `x = r²` to `S(x)`.
pub fn fd_resolvent(
    source: impl Fn(f64) -> f64,
    mode: i32,
    grid: FdGrid,
) -> Result<FdSolution, OracleError> {
    let n = grid.intervals;
    if n < 64 {
        return Err(OracleError::Domain(format!("grid needs >= 64 intervals, got {n}")));
    }
    let m = mode.unsigned_abs() as f64;
    let step = grid.sigma_max / n as f64;
    let x_of = |k: usize| -(-(k as f64) * step).exp_m1();

    // rows: lower[k] h_{k-1} + diag[k] h_k + upper[k] h_{k+1} = rhs[k]
    let mut lower = vec![0.0; n + 1];
    let mut diag = vec![0.0; n + 1];
    let mut upper = vec![0.0; n + 1];
    let mut rhs = vec![0.0; n + 1];

    for k in 1..n {
        let x = x_of(k);
        let beta = x + (m + 1.0) * (1.0 - x);
        lower[k] = x / (step * step) - beta / (2.0 * step);
        diag[k] = -2.0 * x / (step * step) - 2.0;
        upper[k] = x / (step * step) + beta / (2.0 * step);
        rhs[k] = -2.0 * source(x);
    }
    // σ = 0: (m+1) h_σ - 2h = -2S with a one-sided second-order difference
    let c0 = (m + 1.0) / (2.0 * step);
    let (a0, b0, e0, r0) = (-3.0 * c0 - 2.0, 4.0 * c0, -c0, -2.0 * source(0.0));
    // eliminate h_2 using row 1
    let f = e0 / upper[1];
    diag[0] = a0 - f * lower[1];
    upper[0] = b0 - f * diag[1];
    rhs[0] = r0 - f * rhs[1];
    // far end: bounded solution tracks the source
    diag[n] = 1.0;
    rhs[n] = source(x_of(n));

    let reduced = thomas(&lower, &diag, &upper, &rhs)?;
    Ok(FdSolution { mode, step, reduced })
}

fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>, OracleError> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut piv = diag[0];
    if piv.abs() < 1e-300 {
        return Err(OracleError::Singular { row: 0 });
    }
    c[0] = upper[0] / piv;
    d[0] = rhs[0] / piv;
    for k in 1..n {
        piv = diag[k] - lower[k] * c[k - 1];
        if piv.abs() < 1e-300 || !piv.is_finite() {
            return Err(OracleError::Singular { row: k });
        }
        c[k] = upper[k] / piv;
        d[k] = (rhs[k] - lower[k] * d[k - 1]) / piv;
    }
    let mut out = vec![0.0; n];
    out[n - 1] = d[n - 1];
    for k in (0..n - 1).rev() {
        out[k] = d[k] - c[k] * out[k + 1];
    }
    Ok(out)
}

impl FdSolution {
    fn sigma_max(&self) -> f64 {
        self.step * (self.reduced.len() - 1) as f64
    }

    /// Reduced solution at arbitrary `x`, by cubic interpolation in `σ`.
    pub fn reduced_at(&self, x: f64) -> f64 {
        let sigma = -(-x).ln_1p();
        if !(sigma < self.sigma_max()) {
            return *self.reduced.last().unwrap();
        }
        let pos = sigma / self.step;
        let last = self.reduced.len() - 1;
        let base = (pos.floor() as usize).saturating_sub(1).min(last - 3);
        let mut value = 0.0;
        for a in 0..4 {
            let mut weight = 1.0;
            for b in 0..4 {
                if a != b {
                    weight *= (pos - (base + b) as f64) / (a as f64 - b as f64);
                }
            }
            value += weight * self.reduced[base + a];
        }
        value
    }

    /// Radial profile of the full solution, `r^{|m|} h(r²)`.
    pub fn value_at(&self, r: f64) -> f64 {
        r.powi(self.mode.abs()) * self.reduced_at(r * r)
    }

    /// `∫ u · v dA` where `v = r^{|m|} partner(x) e^{-imθ}`, by composite
    /// Simpson on the solver grid: `4π ∫ x^{|m|} h S₂ e^σ dσ`.
    pub fn pair_with(&self, partner: impl Fn(f64) -> f64) -> f64 {
        let n = self.reduced.len() - 1;
        let m = self.mode.abs();
        let mut sum = 0.0;
        for (k, h) in self.reduced.iter().enumerate() {
            let sigma = k as f64 * self.step;
            let x = -(-sigma).exp_m1();
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            sum += w * x.powi(m) * h * partner(x) * sigma.exp();
        }
        4.0 * PI * sum * self.step / 3.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu1_sq(x: f64) -> f64 {
        3.0 / (4.0 * PI) * (1.0 - x).powi(4)
    }

    // closed form of the reduced solution for S = |μ_1|²
    fn exact(x: f64) -> f64 {
        3.0 / (4.0 * PI) * (2.0 / 9.0) * (1.0 - x).powi(2) * (2.0 - x)
    }

    #[test]
    fn constant_source_is_fixed() {
        let sol = fd_resolvent(|_| 1.0, 0, FdGrid::new(4096)).unwrap();
        for h in &sol.reduced {
            assert!((h - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn second_order_convergence() {
        let err = |n: usize| {
            let sol = fd_resolvent(mu1_sq, 0, FdGrid::new(n)).unwrap();
            sol.reduced
                .iter()
                .enumerate()
                .map(|(k, h)| (h - exact(-(-(k as f64) * sol.step).exp_m1())).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(2000), err(4000));
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn short_grid_rejected() {
        assert!(fd_resolvent(|_| 1.0, 0, FdGrid::new(10)).is_err());
    }
}
