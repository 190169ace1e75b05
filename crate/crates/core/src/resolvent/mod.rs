//! The resolvent `D = -2(Δ - 2)^{-1}` on the disk, applied mode by mode.

pub mod checks;
pub mod exact;
pub mod kernel;
pub mod ode;

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Result, WpError};
use crate::separable::{LazyProfile, RadialProfile, SeparableFunction, Term};

pub use checks::{check_contraction, check_lower_bound, self_adjoint_residual, ContractionCheck, LowerBoundCheck};
pub use kernel::{GreenKernel, KernelSettings};
pub use ode::OdeSettings;

/// How each term is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Polynomial recurrence where the source allows it, ODE otherwise.
    #[default]
    Exact,
    Ode,
    Kernel,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::Exact => "exact",
            Route::Ode => "ode",
            Route::Kernel => "kernel",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ResolventConfig {
    pub route: Route,
    pub tolerance: f64,
    pub ode: OdeSettings,
    pub kernel: KernelSettings,
}

impl Default for ResolventConfig {
    fn default() -> Self {
        Self { route: Route::Exact, tolerance: 1e-9, ode: OdeSettings::default(), kernel: KernelSettings::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveMeta {
    pub route: Route,
    /// Radial grid intervals (ODE), polynomial degree (exact) or distance
    /// nodes (kernel).
    pub grid_size: usize,
    pub tolerance: f64,
    pub decay: u32,
    pub estimated_error: f64,
}

#[derive(Debug, Clone)]
pub struct ResolventSolve {
    pub mode: i32,
    pub input: Term,
    pub output: Term,
    pub meta: SolveMeta,
}

#[derive(Debug, Clone)]
pub struct Resolvent {
    config: ResolventConfig,
    kernel: Arc<OnceLock<Arc<GreenKernel>>>,
}

impl Default for Resolvent {
    fn default() -> Self {
        Self::new(ResolventConfig::default())
    }
}

impl Resolvent {
    pub fn new(config: ResolventConfig) -> Self {
        Self { config, kernel: Arc::new(OnceLock::new()) }
    }

    pub fn with_route(route: Route) -> Self {
        Self::new(ResolventConfig { route, ..Default::default() })
    }

    pub fn config(&self) -> &ResolventConfig {
        &self.config
    }

    pub fn kernel(&self) -> Arc<GreenKernel> {
        self.kernel.get_or_init(|| Arc::new(GreenKernel::new(self.config.kernel))).clone()
    }

    pub fn apply(&self, f: &SeparableFunction) -> Result<SeparableFunction> {
        let terms = f
            .terms
            .iter()
            .map(|t| self.solve_term(t).map(|s| s.output))
            .collect::<Result<Vec<_>>>()?;
        Ok(SeparableFunction::from_terms(terms))
    }

    pub fn solve_term(&self, term: &Term) -> Result<ResolventSolve> {
        let mode = term.mode;
        let decay = term.profile.decay();
        let tol = self.config.tolerance;
        let (profile, meta) = match (self.config.route, term.profile.as_ref()) {
            (Route::Exact, RadialProfile::Polynomial { decay, coeffs }) if *decay >= 3 => {
                let q = exact::solve_polynomial(mode.unsigned_abs(), *decay, coeffs)?;
                let meta = SolveMeta { route: Route::Exact, grid_size: q.len(), tolerance: tol, decay: 2, estimated_error: 0.0 };
                (RadialProfile::Polynomial { decay: 2, coeffs: q }, meta)
            }
            (Route::Exact, RadialProfile::Polynomial { decay: 0, coeffs }) if coeffs.len() == 1 && mode == 0 => {
                // D(c) = c
                let meta = SolveMeta { route: Route::Exact, grid_size: 1, tolerance: tol, decay: 0, estimated_error: 0.0 };
                (term.profile.as_ref().clone(), meta)
            }
            (Route::Kernel, _) => {
                let kernel = self.kernel();
                let source = term.profile.clone();
                let eval = move |r: f64| kernel.apply_at(&source, mode, r);
                let meta = SolveMeta {
                    route: Route::Kernel,
                    grid_size: self.config.kernel.panel_order * (self.config.kernel.depth as usize + self.config.kernel.d_max as usize),
                    tolerance: tol,
                    decay: decay.min(2),
                    estimated_error: f64::NAN,
                };
                (RadialProfile::Lazy(LazyProfile { decay: decay.min(2), eval: Arc::new(eval) }), meta)
            }
            _ => {
                let out = ode::solve_mode(&term.profile, mode, &self.config.ode, tol)?;
                let meta = SolveMeta {
                    route: Route::Ode,
                    grid_size: out.intervals,
                    tolerance: tol,
                    decay: out.profile.decay,
                    estimated_error: out.estimated_error,
                };
                (RadialProfile::Sampled(out.profile), meta)
            }
        };
        if meta.estimated_error.is_finite() && meta.estimated_error > tol {
            return Err(WpError::NotConverged { mode, residual: meta.estimated_error, tolerance: tol });
        }
        let output = Term { coeff: term.coeff, mode, profile: Arc::new(profile) };
        Ok(ResolventSolve { mode, input: term.clone(), output, meta })
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::disk::HarmonicForm;

    #[test]
    fn constant_one_is_fixed_on_every_route() {
        let one = SeparableFunction::constant(1.0);
        for route in [Route::Exact, Route::Ode, Route::Kernel] {
            let d = Resolvent::with_route(route).apply(&one).unwrap();
            for r in [0.0, 0.4, 0.9] {
                let v = d.eval(Complex64::new(r, 0.0));
                assert!((v.re - 1.0).abs() < 1e-10 && v.im.abs() < 1e-12, "{route}: {v}");
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let d = Resolvent::default().apply(&SeparableFunction::zero()).unwrap();
        assert!(d.terms.is_empty());
    }

    #[test]
    fn modes_are_preserved() {
        let mu = HarmonicForm::from_coeffs(&[(1, Complex64::new(1.0, 0.0)), (3, Complex64::new(0.5, -0.2))]).unwrap();
        let f = mu.abs_squared();
        for route in [Route::Exact, Route::Ode] {
            let d = Resolvent::with_route(route).apply(&f).unwrap();
            let a: Vec<i32> = f.terms.iter().map(|t| t.mode).collect();
            let b: Vec<i32> = d.terms.iter().map(|t| t.mode).collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn routes_agree_pointwise() {
        let mu = HarmonicForm::from_coeffs(&[(2, Complex64::new(1.0, 0.0)), (3, Complex64::new(0.3, 0.4))]).unwrap();
        let f = mu.abs_squared();
        let exact = Resolvent::with_route(Route::Exact).apply(&f).unwrap();
        let ode = Resolvent::with_route(Route::Ode).apply(&f).unwrap();
        let ker = Resolvent::with_route(Route::Kernel).apply(&f).unwrap();
        for k in 0..12 {
            let z = Complex64::from_polar(0.08 * k as f64, 0.7 * k as f64);
            let e = exact.eval(z);
            assert!((e - ode.eval(z)).norm() < 1e-8);
            assert!((e - ker.eval(z)).norm() < 1e-8);
        }
    }
}
