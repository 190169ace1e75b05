//! The versioned verification report and the pipeline that produces it.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agreement::{beta_agreement, BetaAgreement};
use crate::config::RunConfig;
use crate::error::{Result, WpError};
use crate::spectral::{
    compressed_interlacing, holomorphic_sectional_trend, lambda_min_monotone, noncompactness_evidence,
    random_interlacing, summarize, InterlacingCheck, NoncompactReport, SpectrumSummary, TrendReport,
};
use crate::tensor::{block_tuples, compute_tuples, diagonal_pair_tuples, BlockFailure, Index4, TensorCache, TensorComputer};
use crate::verification::{
    contraction_suite, harnack_suite, kernel_probes, lower_bound_suite, orthonormality, resolvent_identities,
    ContractionSuite, HarnackSuite, KernelProbes, LowerBoundSuite, OrthonormalityCheck, ResolventIdentities,
};
use crate::wedge::{a_vector, assemble_matrix};

pub const REPORT_FORMAT: &str = "wp-report";
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn ok(self) -> bool {
        self == Status::Pass
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(if self.ok() { "pass" } else { "fail" })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub nonpositive: Status,
    pub bound: Status,
    /// Numerical kernel dimension at the largest truncation.
    pub kernel_dim: usize,
    pub kernel_dim_expected: usize,
    pub kernel: Status,
    pub kernel_probes: Status,
    pub monotone_lambda_min: Status,
    pub interlacing: Status,
    pub noncompactness: Status,
    pub trend: Status,
    pub orthonormality: Status,
    pub resolvent_identities: Status,
    pub contraction: Status,
    pub lower_bound: Status,
    pub harnack: Status,
    pub beta: Status,
}

impl Verdicts {
    pub fn all_pass(&self) -> bool {
        [
            self.nonpositive,
            self.bound,
            self.kernel,
            self.kernel_probes,
            self.monotone_lambda_min,
            self.interlacing,
            self.noncompactness,
            self.trend,
            self.orthonormality,
            self.resolvent_identities,
            self.contraction,
            self.lower_bound,
            self.harnack,
            self.beta,
        ]
        .iter()
        .all(|s| s.ok())
    }

    /// Names of the failing verdicts.
    pub fn failures(&self) -> Vec<String> {
        match serde_json::to_value(self) {
            Ok(serde_json::Value::Object(map)) => {
                map.into_iter().filter(|(_, v)| v == "fail").map(|(k, _)| k).collect()
            }
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub orthonormality: OrthonormalityCheck,
    pub resolvent_identities: ResolventIdentities,
    pub contraction: ContractionSuite,
    pub lower_bound: LowerBoundSuite,
    pub harnack: HarnackSuite,
    pub kernel_probes: Vec<KernelProbes>,
    pub interlacing: Vec<InterlacingCheck>,
    pub noncompactness: NoncompactReport,
    pub trend: TrendReport,
    pub beta: BetaAgreement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub version: u32,
    pub config: RunConfig,
    pub tensor_hash: String,
    pub tensor_entries: usize,
    /// One summary per truncation `1..=n`.
    pub spectra: Vec<SpectrumSummary>,
    pub verdicts: Verdicts,
    pub checks: Checks,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.all_pass()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let report: Report = serde_json::from_str(text)
            .map_err(|e| WpError::Format { path: origin.into(), message: e.to_string() })?;
        if report.format != REPORT_FORMAT || report.version != REPORT_VERSION {
            return Err(WpError::Format {
                path: origin.into(),
                message: format!("expected {REPORT_FORMAT} v{REPORT_VERSION}, found {} v{}", report.format, report.version),
            });
        }
        Ok(report)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?, &path.display().to_string())
    }
}

/// Tuples needed for a full verification run.
pub fn required_tuples(config: &RunConfig) -> Vec<Index4> {
    let mut t = block_tuples(config.n as u32);
    t.extend(diagonal_pair_tuples(config.dyadic_max_index()));
    t.extend((1..=config.trend_n_max).map(|k| [k, k, k, k]));
    t.sort_unstable();
    t.dedup();
    t
}

pub fn computer_for(config: &RunConfig) -> TensorComputer {
    TensorComputer::new(config.resolvent.clone()).with_quadrature_order(config.quadrature_order)
}

/// Fills whatever `config` needs into `cache`.
pub fn prepare_cache(config: &RunConfig, cache: &mut TensorCache) -> std::result::Result<usize, BlockFailure> {
    cache.truncation = cache.truncation.max(config.n);
    compute_tuples(&required_tuples(config), cache, &computer_for(config), config.jobs).map(|s| s.new_solves)
}

struct Clock {
    on: bool,
    laps: BTreeMap<String, f64>,
    last: Instant,
}

impl Clock {
    fn lap(&mut self, name: &str) {
        if self.on {
            self.laps.insert(name.into(), self.last.elapsed().as_secs_f64());
            self.last = Instant::now();
        }
    }
}

/// Runs every check against a cache that already holds
/// [`required_tuples`].
pub fn build_report(config: &RunConfig, cache: &TensorCache) -> Result<Report> {
    config.validate()?;
    let mut clock = Clock { on: config.record_timings, laps: BTreeMap::new(), last: Instant::now() };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut spectra = Vec::new();
    let mut kernel_probe_runs = Vec::new();
    let mut interlacing = Vec::new();
    for n in 1..=config.n {
        let m = assemble_matrix(n, cache)?;
        spectra.push(summarize(&m, config.tol_eigen, config.tol_kernel)?);
        if n >= 2 {
            kernel_probe_runs.push(kernel_probes(n, 10, cache, &mut rng)?);
        }
        if n == config.n {
            for dim in 1..=m.dimension().min(8) {
                interlacing.push(random_interlacing(&m.matrix, dim, &mut rng)?);
            }
        }
        if n == 3 {
            let v: Vec<Vec<f64>> = [0, 1].iter().map(|&i| a_vector(i, 3).map(|a| a.to_flat())).collect::<Result<_>>()?;
            interlacing.push(compressed_interlacing(&m.matrix, &v)?);
        }
    }
    clock.lap("spectra");
    let noncompactness = noncompactness_evidence(config.i_max, cache)?;
    let trend = holomorphic_sectional_trend(config.trend_n_max, cache)?;
    clock.lap("noncompactness");
    let checks = Checks {
        orthonormality: orthonormality(1, 13)?,
        resolvent_identities: resolvent_identities(50, &mut rng)?,
        contraction: contraction_suite(100, &mut rng)?,
        lower_bound: lower_bound_suite(20, &mut rng)?,
        harnack: harnack_suite(100, &mut rng)?,
        kernel_probes: kernel_probe_runs,
        interlacing,
        noncompactness,
        trend,
        beta: beta_agreement(1000)?,
    };
    clock.lap("property_suites");

    let top = spectra.last().ok_or_else(|| WpError::Domain("no truncations to report".into()))?;
    let s = Status::from_bool;
    let verdicts = Verdicts {
        nonpositive: s(spectra.iter().all(|x| x.nonpositive.pass)),
        bound: s(spectra.iter().all(|x| x.bound.pass)),
        kernel_dim: top.kernel.dimension,
        kernel_dim_expected: top.kernel.expected,
        kernel: s(spectra.iter().all(|x| x.kernel.pass)),
        kernel_probes: s(checks.kernel_probes.iter().all(|k| k.pass)),
        monotone_lambda_min: s(lambda_min_monotone(&spectra)),
        interlacing: s(checks.interlacing.iter().all(|c| c.pass)),
        noncompactness: s(checks.noncompactness.pass),
        trend: s(checks.trend.pass()),
        orthonormality: s(checks.orthonormality.pass),
        resolvent_identities: s(checks.resolvent_identities.pass),
        contraction: s(checks.contraction.pass),
        lower_bound: s(checks.lower_bound.pass),
        harnack: s(checks.harnack.pass),
        beta: s(checks.beta.pass),
    };
    Ok(Report {
        format: REPORT_FORMAT.into(),
        version: REPORT_VERSION,
        config: config.clone(),
        tensor_hash: cache.content_hash()?,
        tensor_entries: cache.len(),
        spectra,
        verdicts,
        checks,
        timings: clock.on.then_some(clock.laps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        RunConfig { n: 2, i_max: 2, trend_n_max: 4, ..Default::default() }
    }

    #[test]
    fn report_at_n2_passes_and_is_deterministic() {
        let config = small();
        let mut cache = TensorCache::new(2);
        prepare_cache(&config, &mut cache).unwrap();
        let a = build_report(&config, &cache).unwrap();
        assert!(a.passed(), "{:?}", a.verdicts.failures());
        assert_eq!(a.verdicts.kernel_dim, 2);
        assert_eq!(a.spectra.len(), 2);
        assert!(a.timings.is_none());
        let b = build_report(&config, &cache).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let back = Report::from_json(&a.to_json().unwrap(), "mem").unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn missing_entries_are_an_error() {
        let cache = TensorCache::new(2);
        assert!(matches!(build_report(&small(), &cache), Err(WpError::MissingEntry(_))));
    }

    #[test]
    fn wrong_format_is_rejected() {
        assert!(Report::from_json("{}", "x").is_err());
    }
}
