//! Command-line front end for the `wp` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::Serialize;

use crate::agreement::{beta_agreement, form_agreement, resolvent_agreement};
use crate::config::RunConfig;
use crate::error::{Result, WpError};
use crate::plots::export_plots;
use crate::report::{build_report, computer_for, prepare_cache, Report};
use crate::spectral::{noncompactness_evidence, summarize};
use crate::tensor::{
    cache_file_name, compute_block, compute_tuples, diagonal_pair_tuples, persist_partial, BlockFailure, TensorCache,
};
use crate::wedge::assemble_matrix;

#[derive(Debug, Parser)]
#[command(name = "wp", version, about = "Curvature operator of the Weil-Petersson metric on finite truncations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

/// Flags that override the TOML config.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Truncation size.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Largest dyadic index for the `A_i` suite.
    #[arg(long = "i-max", global = true)]
    pub i_max: Option<u32>,
    /// JSONL tensor cache; read if present, updated afterwards.
    #[arg(long, global = true)]
    pub tensor: Option<PathBuf>,
    /// JSON report path.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long = "tol-solver", global = true)]
    pub tol_solver: Option<f64>,
    #[arg(long = "tol-eigen", global = true)]
    pub tol_eigen: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the tensor block for labels `≤ n` into a JSONL cache.
    Tensor {
        /// Output cache (defaults to --tensor, then `tensor-N<n>.jsonl`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assemble the operator matrix and write CSV plus JSON sidecar.
    Operator {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalue summaries for truncations `1..=n`.
    Spectra,
    /// Run every check and write the report; exits 1 on any failure.
    Verify,
    /// Dyadic `A_i` diagnostics and projected spectra.
    Noncompact,
    /// Comparisons against the independent oracle implementations.
    Oracle {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// CSV plot data from a report.
    ExportPlots {
        /// Output directory.
        #[arg(long, default_value = "plots")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Beta,
    Resolvent,
    Form,
}

impl Overrides {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.n {
            c.n = v;
        }
        if let Some(v) = self.i_max {
            c.i_max = v;
        }
        if let Some(v) = &self.tensor {
            c.tensor = Some(v.clone());
        }
        if let Some(v) = &self.report {
            c.report = Some(v.clone());
        }
        if let Some(v) = self.jobs {
            c.jobs = v;
        }
        if let Some(v) = self.tol_solver {
            c.tol_solver = v;
        }
        if let Some(v) = self.tol_eigen {
            c.tol_eigen = v;
        }
        c.resolved()
    }
}

/// What a subcommand wants printed and whether its checks held.
pub struct Outcome {
    pub json: serde_json::Value,
    pub pass: bool,
}

fn open_cache(config: &RunConfig) -> Result<TensorCache> {
    match &config.tensor {
        Some(p) => TensorCache::open_or_new(p, config.n),
        None => Ok(TensorCache::new(config.n)),
    }
}

/// Saves the partial cache and manifest before surfacing the error.
fn settle(
    outcome: std::result::Result<usize, BlockFailure>,
    cache: &TensorCache,
    path: Option<&Path>,
) -> Result<usize> {
    match outcome {
        Ok(n) => {
            if let Some(p) = path {
                cache.save(p)?;
            }
            Ok(n)
        }
        Err(failure) => {
            if let Some(p) = path {
                persist_partial(cache, &failure, p)?;
            }
            Err(failure.first_error)
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(v)?)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let config = cli.overrides.resolve()?;
    match &cli.command {
        Command::Tensor { out } => {
            let path = out.clone().or_else(|| config.tensor.clone()).unwrap_or_else(|| cache_file_name(config.n).into());
            let mut cache = TensorCache::open_or_new(&path, config.n)?;
            let stats = compute_block(config.n as u32, &mut cache, &computer_for(&config), config.jobs);
            let new_solves = settle(stats.map(|s| s.new_solves), &cache, Some(&path))?;
            Ok(Outcome {
                json: serde_json::json!({
                    "path": path,
                    "entries": cache.len(),
                    "new_solves": new_solves,
                    "tensor_hash": cache.content_hash()?,
                }),
                pass: true,
            })
        }
        Command::Operator { out } => {
            let mut cache = open_cache(&config)?;
            let stats = compute_block(config.n as u32, &mut cache, &computer_for(&config), config.jobs);
            settle(stats.map(|s| s.new_solves), &cache, config.tensor.as_deref())?;
            let m = assemble_matrix(config.n, &cache)?;
            let path = out.clone().unwrap_or_else(|| format!("operator-N{}.csv", config.n).into());
            m.save(&path, Some(cache.content_hash()?))?;
            Ok(Outcome {
                json: serde_json::json!({
                    "path": path,
                    "sidecar": crate::wedge::sidecar_path(&path),
                    "dimension": m.dimension(),
                    "asymmetry": m.asymmetry(),
                }),
                pass: true,
            })
        }
        Command::Spectra => {
            let mut cache = open_cache(&config)?;
            let stats = compute_block(config.n as u32, &mut cache, &computer_for(&config), config.jobs);
            settle(stats.map(|s| s.new_solves), &cache, config.tensor.as_deref())?;
            let summaries = (1..=config.n)
                .map(|n| summarize(&assemble_matrix(n, &cache)?, config.tol_eigen, config.tol_kernel))
                .collect::<Result<Vec<_>>>()?;
            let pass = summaries.iter().all(|s| s.nonpositive.pass && s.bound.pass && s.kernel.pass);
            Ok(Outcome { json: json(&summaries)?, pass })
        }
        Command::Verify => {
            let mut cache = open_cache(&config)?;
            let solved = prepare_cache(&config, &mut cache);
            settle(solved, &cache, config.tensor.as_deref())?;
            let report = build_report(&config, &cache)?;
            if let Some(p) = &config.report {
                report.save(p)?;
            }
            let failures = report.verdicts.failures();
            Ok(Outcome {
                json: serde_json::json!({
                    "report": config.report,
                    "pass": report.passed(),
                    "failures": failures,
                    "verdicts": report.verdicts,
                }),
                pass: report.passed(),
            })
        }
        Command::Noncompact => {
            let mut cache = open_cache(&config)?;
            let tuples = diagonal_pair_tuples(config.dyadic_max_index());
            let stats = compute_tuples(&tuples, &mut cache, &computer_for(&config), config.jobs);
            settle(stats.map(|s| s.new_solves), &cache, config.tensor.as_deref())?;
            let r = noncompactness_evidence(config.i_max, &cache)?;
            Ok(Outcome { pass: r.pass, json: json(&r)? })
        }
        Command::Oracle { suite } => {
            let (pass, details) = match suite {
                Suite::Beta => {
                    let r = beta_agreement(1000)?;
                    (r.pass, json(&r)?)
                }
                Suite::Resolvent => {
                    let r = resolvent_agreement(10)?;
                    (r.pass, json(&r)?)
                }
                Suite::Form => {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
                    let r = form_agreement(config.n.min(3), 20, &mut rng)?;
                    (r.pass, json(&r)?)
                }
            };
            Ok(Outcome {
                json: serde_json::json!({ "suite": suite, "pass": pass, "details": details }),
                pass,
            })
        }
        Command::ExportPlots { out } => {
            let path = config.report.as_ref().ok_or_else(|| WpError::Config {
                field: "report".into(),
                message: "export-plots needs --report".into(),
            })?;
            let report = Report::load(path)?;
            let files = export_plots(&report, out)?;
            Ok(Outcome { json: serde_json::json!({ "files": files }), pass: true })
        }
    }
}

/// Runs, prints, and maps the result to a process exit code: 0 on
/// success, 1 when a check fails, 2 on errors.
pub fn main_with(cli: &Cli) -> u8 {
    match run(cli) {
        Ok(o) => {
            let mut stdout = std::io::stdout().lock();
            let text = serde_json::to_string_pretty(&o.json).unwrap_or_default();
            let _ = writeln!(stdout, "{text}");
            if o.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("wp").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_config() {
        let cli = parse(&["verify", "--n", "2", "--tol-eigen", "1e-8", "--i-max", "3"]);
        let c = cli.overrides.resolve().unwrap();
        assert_eq!((c.n, c.i_max, c.tol_eigen), (2, 3, 1e-8));
    }

    #[test]
    fn zero_truncation_is_a_config_error() {
        let cli = parse(&["tensor", "--n", "0"]);
        assert!(matches!(run(&cli), Err(WpError::Config { .. })));
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(Cli::try_parse_from(["wp", "oracle", "--suite", "nope"]).is_err());
    }
}
