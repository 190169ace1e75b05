//! Run configuration: TOML file plus command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, WpError};
use crate::resolvent::ResolventConfig;
use crate::separable::GENERAL_ORDER;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Truncation: the operator acts on `∧²` of `span{μ_1..μ_n}` over ℝ.
    pub n: usize,
    pub quadrature_order: usize,
    /// Dyadic vectors `A_0..A_{i_max}`.
    pub i_max: u32,
    /// Holomorphic sectional values for `1..=trend_n_max`.
    pub trend_n_max: u32,
    pub tensor: Option<PathBuf>,
    pub report: Option<PathBuf>,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub tol_solver: f64,
    pub tol_eigen: f64,
    pub tol_kernel: f64,
    /// Random vectors for `J∘` kernel probes and interlacing.
    pub seed: u64,
    /// Wall-clock timings make reports differ between runs, so they are
    /// off unless asked for.
    pub record_timings: bool,
    pub resolvent: ResolventConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 3,
            quadrature_order: GENERAL_ORDER,
            i_max: 4,
            trend_n_max: 12,
            tensor: None,
            report: None,
            jobs: 0,
            tol_solver: 1e-9,
            tol_eigen: 1e-9,
            tol_kernel: 1e-7,
            seed: 20240601,
            record_timings: false,
            resolvent: ResolventConfig::default(),
        }
    }
}

fn bad(field: &str, message: impl Into<String>) -> WpError {
    WpError::Config { field: field.into(), message: message.into() }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| bad("toml", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text).map_err(|e| match e {
            WpError::Config { message, .. } => bad(&path.display().to_string(), message),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| bad("toml", e.to_string()))
    }

    /// Copies the solver tolerance into the resolvent block and checks
    /// ranges.
    pub fn resolved(mut self) -> Result<Self> {
        self.resolvent.tolerance = self.tol_solver;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(bad("n", "truncation must be at least 1"));
        }
        if self.n > 64 {
            return Err(bad("n", format!("truncation {} is beyond what dense assembly supports (64)", self.n)));
        }
        if self.quadrature_order < 8 {
            return Err(bad("quadrature_order", "must be at least 8"));
        }
        if self.i_max > 8 {
            return Err(bad("i_max", "dyadic blocks beyond i = 8 need indices above 511"));
        }
        if self.trend_n_max == 0 {
            return Err(bad("trend_n_max", "must be at least 1"));
        }
        for (field, v) in [("tol_solver", self.tol_solver), ("tol_eigen", self.tol_eigen), ("tol_kernel", self.tol_kernel)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(bad(field, format!("tolerance must be positive and finite, got {v}")));
            }
        }
        if self.resolvent.ode.intervals < 64 {
            return Err(bad("resolvent.ode.intervals", "must be at least 64"));
        }
        Ok(())
    }

    /// Largest basis index touched by the dyadic suite.
    pub fn dyadic_max_index(&self) -> u32 {
        (1u32 << (self.i_max + 1)) - 1
    }
}
