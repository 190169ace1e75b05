//! Curvature tensor entries `T[i,j,k,l] = ∫ D(μ_i μ̄_j) μ_k μ̄_l dA`.

pub mod cache;

use std::collections::BTreeSet;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cache::{cache_file_name, manifest_path, TensorCache};

use crate::disk::BasisElement;
use crate::error::{Result, WpError};
use crate::resolvent::{Resolvent, ResolventConfig, Route};
use crate::separable::{SeparableFunction, GENERAL_ORDER};

pub type Index4 = [u32; 4];

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Net angular mode `(p_i - p_j) + (p_k - p_l)` vanishes.
pub fn selection_rule(idx: Index4) -> bool {
    let [i, j, k, l] = idx.map(i64::from);
    i - j + k - l == 0
}

/// The four orderings that share a value: `(ijkl)`, `(klij)`, `(jilk)`,
/// `(lkji)`.
pub fn orbit(idx: Index4) -> [Index4; 4] {
    let [i, j, k, l] = idx;
    [[i, j, k, l], [k, l, i, j], [j, i, l, k], [l, k, j, i]]
}

/// Lexicographic minimum of the orbit.
pub fn canonical(idx: Index4) -> Index4 {
    orbit(idx).into_iter().min().expect("orbit is nonempty")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryMeta {
    pub route: Route,
    pub quadrature_order: usize,
    pub solver_tolerance: f64,
    pub code_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorEntry {
    pub indices: Index4,
    pub value: f64,
    pub meta: EntryMeta,
}

/// Evaluates single entries through the resolvent.
#[derive(Debug, Clone)]
pub struct TensorComputer {
    resolvent: Resolvent,
    quadrature_order: usize,
}

impl Default for TensorComputer {
    fn default() -> Self {
        Self::new(ResolventConfig::default())
    }
}

impl TensorComputer {
    pub fn new(config: ResolventConfig) -> Self {
        Self { resolvent: Resolvent::new(config), quadrature_order: GENERAL_ORDER }
    }

    pub fn with_quadrature_order(mut self, order: usize) -> Self {
        self.quadrature_order = order.max(8);
        self
    }

    pub fn resolvent(&self) -> &Resolvent {
        &self.resolvent
    }

    fn product(a: u32, b: u32) -> Result<SeparableFunction> {
        let ta = BasisElement::with_index(a)?.term();
        let tb = BasisElement::with_index(b)?.term();
        Ok(SeparableFunction::from_terms(vec![ta.mul(&tb.conj())?]))
    }

    /// Value of the defining integral without using any symmetry. The
    /// imaginary part is checked, not assumed, to vanish.
    pub fn evaluate(&self, idx: Index4) -> Result<f64> {
        if idx.contains(&0) {
            return Err(WpError::Domain(format!("tensor indices start at 1: {idx:?}")));
        }
        if !selection_rule(idx) {
            return Ok(0.0);
        }
        let [i, j, k, l] = idx;
        let wrap = |e: WpError| WpError::Entry { index: idx, source: Box::new(e) };
        let source = Self::product(i, j).map_err(wrap)?;
        let partner = Self::product(k, l).map_err(wrap)?;
        let resolved = self.resolvent.apply(&source).map_err(wrap)?;
        let value = resolved.bilinear_with_order(&partner, self.quadrature_order).map_err(wrap)?;
        let residue = value.im.abs();
        if residue > 1e-12 * value.re.abs().max(1.0) {
            return Err(WpError::NonReal { index: idx, residue });
        }
        Ok(value.re)
    }

    pub fn entry(&self, idx: Index4) -> Result<TensorEntry> {
        let value = self.evaluate(idx)?;
        let cfg = self.resolvent.config();
        Ok(TensorEntry {
            indices: canonical(idx),
            value,
            meta: EntryMeta {
                route: cfg.route,
                quadrature_order: self.quadrature_order,
                solver_tolerance: cfg.tolerance,
                code_version: CODE_VERSION.to_string(),
            },
        })
    }
}

/// Memoized entry lookup.
pub fn tensor_entry(idx: Index4, cache: &mut TensorCache, computer: &TensorComputer) -> Result<f64> {
    if let Some(v) = cache.get(idx) {
        return Ok(v);
    }
    let entry = computer.entry(idx)?;
    let v = entry.value;
    cache.insert(entry);
    Ok(v)
}

/// `R_{i j̄ k l̄} = T[i,j,k,l] + T[i,l,k,j]`.
pub fn curvature_component(idx: Index4, cache: &TensorCache) -> Result<f64> {
    let [i, j, k, l] = idx;
    Ok(cache.require([i, j, k, l])? + cache.require([i, l, k, j])?)
}

/// Canonical selection-rule tuples with all labels `≤ n`.
pub fn block_tuples(n: u32) -> Vec<Index4> {
    let mut set = BTreeSet::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let idx = [i, j, k, l];
                    if selection_rule(idx) {
                        set.insert(canonical(idx));
                    }
                }
            }
        }
    }
    set.into_iter().collect()
}

/// Mode-zero tuples `(k,k,l,l)` and `(k,l,l,k)` for all `k, l ≤ max_index`.
/// These are the only entries touched by bivectors `Σ β_k ∂x_k∧∂y_k`, such
/// as the dyadic `A_i` vectors.
pub fn diagonal_pair_tuples(max_index: u32) -> Vec<Index4> {
    let mut set = BTreeSet::new();
    for k in 1..=max_index {
        for l in 1..=max_index {
            set.insert(canonical([k, k, l, l]));
            set.insert(canonical([k, l, l, k]));
        }
    }
    set.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockStats {
    pub requested: usize,
    pub new_solves: usize,
}

/// Failure of a batch: the cache keeps everything that succeeded.
#[derive(Debug)]
pub struct BlockFailure {
    pub missing: Vec<Index4>,
    pub first_error: WpError,
}

impl std::fmt::Display for BlockFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} tensor entries failed; first error: {}", self.missing.len(), self.first_error)
    }
}

impl std::error::Error for BlockFailure {}

/// Computes whichever of `tuples` are absent, in parallel, then inserts
/// them in one batch. Values do not depend on scheduling.
pub fn compute_tuples(
    tuples: &[Index4],
    cache: &mut TensorCache,
    computer: &TensorComputer,
    jobs: usize,
) -> std::result::Result<BlockStats, BlockFailure> {
    let todo: Vec<Index4> = tuples.iter().copied().filter(|t| !cache.contains(*t)).collect();
    let run = || todo.par_iter().map(|&t| (t, computer.entry(t))).collect::<Vec<_>>();
    let results = if jobs > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    } else {
        run()
    };
    let mut missing = Vec::new();
    let mut first_error = None;
    let mut new_solves = 0;
    for (t, r) in results {
        match r {
            Ok(entry) => {
                cache.insert(entry);
                new_solves += 1;
            }
            Err(e) => {
                missing.push(t);
                first_error.get_or_insert(e);
            }
        }
    }
    match first_error {
        None => Ok(BlockStats { requested: tuples.len(), new_solves }),
        Some(first_error) => Err(BlockFailure { missing, first_error }),
    }
}

/// Fills every canonical tuple with labels `≤ n`.
pub fn compute_block(
    n: u32,
    cache: &mut TensorCache,
    computer: &TensorComputer,
    jobs: usize,
) -> std::result::Result<BlockStats, BlockFailure> {
    if n == 0 {
        return Err(BlockFailure { missing: vec![], first_error: WpError::Domain("truncation must be >= 1".into()) });
    }
    cache.truncation = cache.truncation.max(n as usize);
    compute_tuples(&block_tuples(n), cache, computer, jobs)
}

/// Writes the partial cache and a manifest of the tuples that failed.
pub fn persist_partial(cache: &TensorCache, failure: &BlockFailure, path: &Path) -> Result<()> {
    cache.save(path)?;
    let manifest = serde_json::json!({
        "missing": failure.missing,
        "error": failure.first_error.to_string(),
    });
    std::fs::write(manifest_path(path), serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}
