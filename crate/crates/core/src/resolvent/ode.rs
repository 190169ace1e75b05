//! Per-mode boundary value solve in hyperbolic radius `t`.
//!
//! With `u = U(t) e^{imθ}` the equation `(Δ - 2)u = -2f` becomes
//! `(sinh t U')' - (m²/sinh t + 2 sinh t) U = -2 sinh t F`, discretized in
//! flux form on a uniform grid and solved by the tridiagonal algorithm.
//! Three grids `N, 2N, 4N` give two Richardson extrapolants whose difference
//! is the reported error estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WpError};
use crate::separable::{RadialProfile, SampledProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OdeSettings {
    pub t_max: f64,
    pub intervals: usize,
    pub max_refinements: usize,
}

impl Default for OdeSettings {
    fn default() -> Self {
        Self { t_max: 24.0, intervals: 2048, max_refinements: 4 }
    }
}

#[derive(Debug, Clone)]
pub struct OdeOutcome {
    pub profile: SampledProfile,
    /// Coarsest grid of the final three-level solve.
    pub intervals: usize,
    pub estimated_error: f64,
}

fn solve_grid(source: &[f64], m: i32, t_max: f64) -> Result<Vec<f64>> {
    let n = source.len() - 1;
    let h = t_max / n as f64;
    let m2 = (m as f64).powi(2);
    let mut lower = vec![0.0; n + 1];
    let mut diag = vec![0.0; n + 1];
    let mut upper = vec![0.0; n + 1];
    let mut rhs = vec![0.0; n + 1];
    for k in 1..n {
        let t = k as f64 * h;
        let s_minus = (t - 0.5 * h).sinh();
        let s_plus = (t + 0.5 * h).sinh();
        let s = t.sinh();
        // row divided by sinh t to keep the system well scaled
        lower[k] = s_minus / (s * h * h);
        upper[k] = s_plus / (s * h * h);
        diag[k] = -(s_minus + s_plus) / (s * h * h) - m2 / (s * s) - 2.0;
        rhs[k] = -2.0 * source[k];
    }
    if m == 0 {
        // half cell [0, h/2]: flux balance with zero flux at the centre
        let cell = (0.5 * h).cosh() - 1.0;
        let flux = (0.5 * h).sinh() / h;
        diag[0] = -flux - 2.0 * cell;
        upper[0] = flux;
        rhs[0] = -2.0 * cell * source[0];
    } else {
        diag[0] = 1.0;
        rhs[0] = 0.0;
    }
    diag[n] = 1.0;
    rhs[n] = source[n];
    tridiagonal(&lower, &diag, &upper, &rhs)
}

fn tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for k in 0..n {
        let prev_c = if k > 0 { c[k - 1] } else { 0.0 };
        let prev_d = if k > 0 { d[k - 1] } else { 0.0 };
        let piv = diag[k] - lower[k] * prev_c;
        if piv == 0.0 || !piv.is_finite() {
            return Err(WpError::Singular(format!("zero pivot in radial solve at row {k}")));
        }
        c[k] = upper[k] / piv;
        d[k] = (rhs[k] - lower[k] * prev_d) / piv;
    }
    for k in (0..n - 1).rev() {
        d[k] -= c[k] * d[k + 1];
    }
    Ok(d)
}

fn sample(profile: &RadialProfile, m: i32, n: usize, t_max: f64) -> Result<Vec<f64>> {
    let h = t_max / n as f64;
    let values: Vec<f64> = (0..=n)
        .map(|k| profile.eval((0.5 * k as f64 * h).tanh(), m.unsigned_abs()))
        .collect();
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(WpError::Unbounded { index });
    }
    Ok(values)
}

fn richardson(coarse: &[f64], fine: &[f64]) -> Vec<f64> {
    coarse
        .iter()
        .enumerate()
        .map(|(k, c)| (4.0 * fine[2 * k] - c) / 3.0)
        .collect()
}

/// Solves one mode to the requested tolerance or reports the residual
/// error estimate it stalled at.
pub fn solve_mode(profile: &RadialProfile, m: i32, settings: &OdeSettings, tol: f64) -> Result<OdeOutcome> {
    let t_max = settings.t_max;
    let mut n = settings.intervals.max(16);
    let mut u1 = solve_grid(&sample(profile, m, n, t_max)?, m, t_max)?;
    let mut u2 = solve_grid(&sample(profile, m, 2 * n, t_max)?, m, t_max)?;
    let mut last_err = f64::INFINITY;
    for _ in 0..=settings.max_refinements {
        let u4 = solve_grid(&sample(profile, m, 4 * n, t_max)?, m, t_max)?;
        let r1 = richardson(&u1, &u2);
        let r2 = richardson(&u2, &u4);
        let err = r1
            .iter()
            .enumerate()
            .map(|(k, v)| (v - r2[2 * k]).abs())
            .fold(0.0, f64::max);
        last_err = err;
        if err <= tol {
            let step = t_max / (2 * n) as f64;
            let decay = profile.decay().min(2);
            return Ok(OdeOutcome { profile: SampledProfile::new(step, r2, decay)?, intervals: n, estimated_error: err });
        }
        u1 = u2;
        u2 = u4;
        n *= 2;
    }
    Err(WpError::NotConverged { mode: m, residual: last_err, tolerance: tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_reproduced_exactly() {
        let out = solve_mode(&RadialProfile::constant(1.0), 0, &OdeSettings::default(), 1e-11).unwrap();
        assert!(out.profile.values.iter().all(|v| (v - 1.0).abs() < 1e-11));
    }

    #[test]
    fn first_basis_square_matches_closed_form() {
        let p = RadialProfile::Polynomial { decay: 4, coeffs: vec![1.0] };
        let out = solve_mode(&p, 0, &OdeSettings::default(), 1e-10).unwrap();
        for k in 0..40 {
            let r = k as f64 / 40.0;
            let x = r * r;
            let exact = 2.0 / 9.0 * (1.0 - x).powi(2) * (2.0 - x);
            let got = out.profile.at_t(2.0 * r.atanh());
            assert!((got - exact).abs() < 1e-9, "r={r}: {got} vs {exact}");
        }
    }

    #[test]
    fn nonzero_mode_converges() {
        // mode 2 source r²(1-x)^4
        let p = RadialProfile::Polynomial { decay: 4, coeffs: vec![1.0] };
        let out = solve_mode(&p, 2, &OdeSettings::default(), 1e-9).unwrap();
        let q = super::super::exact::solve_polynomial(2, 4, &[1.0]).unwrap();
        for k in 1..30 {
            let r = k as f64 / 31.0;
            let x = r * r;
            let exact = r * r * (1.0 - x).powi(2) * q.iter().rev().fold(0.0, |a, c| a * x + c);
            let got = out.profile.at_t(2.0 * r.atanh());
            assert!((got - exact).abs() < 1e-8, "r={r}: {got} vs {exact}");
        }
    }

    #[test]
    fn unreachable_tolerance_reports_residual() {
        let p = RadialProfile::Polynomial { decay: 4, coeffs: vec![1.0] };
        let s = OdeSettings { intervals: 32, max_refinements: 0, ..Default::default() };
        match solve_mode(&p, 1, &s, 1e-15) {
            Err(WpError::NotConverged { mode, residual, .. }) => {
                assert_eq!(mode, 1);
                assert!(residual > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
