//! Eigen-analysis of truncated curvature operators and the finite-rank
//! evidence for non-positivity, the kernel, the uniform bound and
//! noncompactness.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::disk::HarmonicForm;
use crate::error::{Result, WpError};
use crate::tensor::TensorCache;
use crate::wedge::{a_vector, wedge_bilinear_form, wedge_quadratic_form, OperatorMatrix, WedgeVector};

/// `16 √(3/π)`.
pub fn curvature_bound() -> f64 {
    16.0 * (3.0 / PI).sqrt()
}

/// `2^{-30}`.
pub const A_VECTOR_FLOOR: f64 = 9.313225746154785e-10;

/// `135 / (π 2^{35})`.
pub fn asymptotic_a_bound() -> f64 {
    135.0 / (PI * 2f64.powi(35))
}

/// Eigenvalues in ascending order.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(WpError::Eigen("matrix is not square".into()));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(WpError::Eigen("matrix has non-finite entries".into()));
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    if ev.iter().any(|v| !v.is_finite()) {
        return Err(WpError::Eigen("eigenvalues did not converge".into()));
    }
    ev.sort_by(|a, b| a.total_cmp(b));
    Ok(ev)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonpositiveVerdict {
    pub lambda_max: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn verify_nonpositive(eigs: &[f64], tol: f64) -> NonpositiveVerdict {
    let lambda_max = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lambda_max = if eigs.is_empty() { 0.0 } else { lambda_max };
    NonpositiveVerdict { lambda_max, tolerance: tol, pass: lambda_max <= tol }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub abs_lambda_min: f64,
    pub bound: f64,
    pub pass: bool,
}

pub fn verify_bound(eigs: &[f64]) -> BoundVerdict {
    let abs_lambda_min = eigs.iter().map(|v| -v).fold(0.0, f64::max);
    let bound = curvature_bound();
    BoundVerdict { abs_lambda_min, bound, pass: abs_lambda_min <= bound }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelVerdict {
    pub dimension: usize,
    pub expected: usize,
    pub tolerance: f64,
    /// Smallest `|λ|` outside the kernel.
    pub gap: Option<f64>,
    pub gap_ok: bool,
    pub pass: bool,
}

/// Counts `|λ| < tol` and requires the nearest nonzero eigenvalue to sit at
/// least ten tolerances away. The expected dimension is `n(n-1)`.
pub fn kernel_dimension(eigs: &[f64], n: usize, tol: f64) -> KernelVerdict {
    let dimension = eigs.iter().filter(|v| v.abs() < tol).count();
    let gap = eigs.iter().map(|v| v.abs()).filter(|v| *v >= tol).reduce(f64::min);
    let gap_ok = gap.is_none_or(|g| g >= 10.0 * tol);
    let expected = n * n.saturating_sub(1);
    KernelVerdict { dimension, expected, tolerance: tol, gap, gap_ok, pass: gap_ok && dimension == expected }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterlacingCheck {
    pub subspace_dim: usize,
    pub compressed: Vec<f64>,
    pub pass: bool,
}

/// Cauchy interlacing `λ_k ≤ μ_k ≤ λ_{k+N-m}` for the eigenvalues `μ` of a
/// compression to an `m`-dimensional subspace.
pub fn interlaces(full: &[f64], compressed: &[f64], tol: f64) -> bool {
    let (n, m) = (full.len(), compressed.len());
    m <= n
        && compressed
            .iter()
            .enumerate()
            .all(|(k, mu)| full[k] <= mu + tol && *mu <= full[k + n - m] + tol)
}

/// Eigenvalues of `M` compressed to the span of `vectors` (orthonormalized
/// first), with the interlacing verdict against the full spectrum.
pub fn compressed_interlacing(m: &DMatrix<f64>, vectors: &[Vec<f64>]) -> Result<InterlacingCheck> {
    let n = m.nrows();
    let dim = vectors.len();
    if dim == 0 || dim > n || vectors.iter().any(|v| v.len() != n) {
        return Err(WpError::Domain(format!("need 1..={n} vectors of length {n}")));
    }
    let raw = DMatrix::from_fn(n, dim, |r, c| vectors[c][r]);
    let qr = raw.qr();
    if qr.r().diagonal().iter().any(|d| d.abs() < 1e-12) {
        return Err(WpError::Domain("subspace vectors are linearly dependent".into()));
    }
    let q = qr.q();
    let compressed = eigenvalues(&(q.transpose() * m * &q))?;
    let full = eigenvalues(m)?;
    let pass = interlaces(&full, &compressed, 1e-10);
    Ok(InterlacingCheck { subspace_dim: dim, compressed, pass })
}

/// Compresses `M` to a random `dim`-dimensional subspace.
pub fn random_interlacing(m: &DMatrix<f64>, dim: usize, rng: &mut impl Rng) -> Result<InterlacingCheck> {
    let n = m.nrows();
    if dim == 0 || dim > n {
        return Err(WpError::Domain(format!("subspace dimension {dim} out of range 1..={n}")));
    }
    let vectors: Vec<Vec<f64>> = (0..dim).map(|_| (0..n).map(|_| rng.gen::<f64>() - 0.5).collect()).collect();
    compressed_interlacing(m, &vectors)
}

/// Everything reported about one truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub n: usize,
    pub dimension: usize,
    pub eigenvalues: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub asymmetry: f64,
    pub nonpositive: NonpositiveVerdict,
    pub bound: BoundVerdict,
    pub kernel: KernelVerdict,
}

pub fn summarize(m: &OperatorMatrix, tol_eigen: f64, tol_kernel: f64) -> Result<SpectrumSummary> {
    let eigs = eigenvalues(&m.matrix)?;
    Ok(SpectrumSummary {
        n: m.n,
        dimension: eigs.len(),
        lambda_min: eigs.first().copied().unwrap_or(0.0),
        lambda_max: eigs.last().copied().unwrap_or(0.0),
        asymmetry: m.asymmetry(),
        nonpositive: verify_nonpositive(&eigs, tol_eigen),
        bound: verify_bound(&eigs),
        kernel: kernel_dimension(&eigs, m.n, tol_kernel),
        eigenvalues: eigs,
    })
}

/// `|λ_min|` never decreases when the truncation grows.
pub fn lambda_min_monotone(summaries: &[SpectrumSummary]) -> bool {
    summaries.windows(2).all(|w| -w[1].lambda_min >= -w[0].lambda_min - 1e-12)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ADiagnostic {
    pub i: u32,
    pub q_value: f64,
    /// `-Q̃(A_i, A_i)`
    pub neg_q: f64,
    /// The resolvent term alone, `4·2^{-i} Σ T[k,k,l,l]`.
    pub resolvent_term: f64,
    /// `(4/(3·2^i)) ∫ (Σ|μ_k|²)² dA`
    pub integral_bound: f64,
    /// `15/(π 2^{35}) (Σ(k+1)³)² / 2^{8i}`
    pub cube_sum_bound: f64,
    pub cube_sum_condition: bool,
    pub above_floor: bool,
    pub chain_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionDiagnostic {
    pub m: u32,
    pub span: Vec<u32>,
    pub eigenvalues: Vec<f64>,
    pub trace: f64,
    pub diagonal_sum: f64,
    pub trace_ok: bool,
    pub in_range: bool,
    pub count_below: usize,
    pub required: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoncompactReport {
    pub i_max: u32,
    pub floor: f64,
    pub asymptotic_bound: f64,
    pub vectors: Vec<ADiagnostic>,
    pub largest_i_above_asymptotic: bool,
    /// Smallest `i0` from which the dyadic cube sum exceeds `3·2^{4i}`.
    pub cube_sum_start: Option<u32>,
    pub projections: Vec<ProjectionDiagnostic>,
    pub pass: bool,
}

fn block(i: u32) -> std::ops::Range<u32> {
    (1u32 << i)..(1u32 << (i + 1))
}

/// `-Q̃(A_i,A_i)` diagnostics and projected-operator checks on
/// `span{A_m, …, A_{2m-1}}`; the cache must hold
/// [`crate::tensor::diagonal_pair_tuples`] up to `2^{i_max+1} - 1`.
pub fn noncompactness_evidence(i_max: u32, cache: &TensorCache) -> Result<NoncompactReport> {
    let n = (1usize << (i_max + 1)) - 1;
    let floor = A_VECTOR_FLOOR;
    let asymptotic = asymptotic_a_bound();
    let mut vectors = Vec::new();
    for i in 0..=i_max {
        let a = a_vector(i, n)?;
        let q_value = wedge_quadratic_form(&a, cache)?;
        let scale = 4.0 / 2f64.powi(i as i32);
        let mut resolvent_term = 0.0;
        for k in block(i) {
            for l in block(i) {
                resolvent_term += scale * cache.require([k, k, l, l])?;
            }
        }
        let coeffs: Vec<(u32, Complex64)> = block(i).map(|k| (k, Complex64::new(1.0, 0.0))).collect();
        // Σ_k |μ_k|² as the diagonal part of |Σ μ_k|²
        let mut sum_sq = crate::separable::SeparableFunction::zero();
        for (k, _) in &coeffs {
            sum_sq = sum_sq.add(&HarmonicForm::basis(*k)?.abs_squared());
        }
        let integral = sum_sq.bilinear(&sum_sq)?.re;
        let integral_bound = scale / 3.0 * integral;
        let cubes = wp_oracle::dyadic_cube_sum(i);
        let cubes_f: f64 = cubes.to_string().parse().unwrap_or(f64::NAN);
        let cube_sum_bound = 15.0 / (PI * 2f64.powi(35)) * cubes_f.powi(2) / 2f64.powi(8 * i as i32);
        let cube_sum_condition = cubes > wp_oracle::cube_sum_threshold(i);
        let neg_q = -q_value;
        let mut chain_ok = neg_q >= resolvent_term - 1e-12 && resolvent_term >= integral_bound - 1e-12;
        if i >= 1 {
            chain_ok &= integral_bound >= cube_sum_bound;
            if cube_sum_condition {
                chain_ok &= cube_sum_bound >= asymptotic;
            }
        }
        vectors.push(ADiagnostic {
            i,
            q_value,
            neg_q,
            resolvent_term,
            integral_bound,
            cube_sum_bound,
            cube_sum_condition,
            above_floor: neg_q >= floor,
            chain_ok,
        });
    }
    let largest_i_above_asymptotic = vectors.last().is_some_and(|v| v.neg_q >= asymptotic);

    let mut projections = Vec::new();
    let mut m = 1;
    while 2 * m - 1 <= i_max {
        let span: Vec<u32> = (m..2 * m).collect();
        let vecs: Vec<WedgeVector> = span.iter().map(|&i| a_vector(i, n)).collect::<Result<_>>()?;
        let k = vecs.len();
        let mut p = DMatrix::zeros(k, k);
        for a in 0..k {
            for b in 0..=a {
                let v = wedge_bilinear_form(&vecs[a], &vecs[b], cache)?;
                p[(a, b)] = v;
                p[(b, a)] = v;
            }
        }
        let eigs = eigenvalues(&p)?;
        let trace: f64 = eigs.iter().sum();
        let diagonal_sum: f64 = span.iter().map(|&i| vectors[i as usize].q_value).sum();
        let trace_ok = (trace - diagonal_sum).abs() <= 1e-8;
        let in_range = eigs.iter().all(|&v| v <= 1e-12 && v >= -curvature_bound());
        let count_below = eigs.iter().filter(|&&v| v <= -(2f64.powi(-31))).count();
        let required = (m as f64).sqrt().floor() as usize;
        projections.push(ProjectionDiagnostic {
            m,
            span,
            pass: trace_ok && in_range && count_below >= required,
            eigenvalues: eigs,
            trace,
            diagonal_sum,
            trace_ok,
            in_range,
            count_below,
            required,
        });
        m += 1;
    }
    let pass = vectors.iter().all(|v| v.above_floor && v.chain_ok)
        && largest_i_above_asymptotic
        && projections.iter().all(|p| p.pass);
    Ok(NoncompactReport {
        i_max,
        floor,
        asymptotic_bound: asymptotic,
        vectors,
        largest_i_above_asymptotic,
        cube_sum_start: wp_oracle::first_cube_sum_index(i_max),
        projections,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    /// `R_{n n̄ n n̄} = 2 T[n,n,n,n]` for `n = 1..=n_max`.
    pub values: Vec<f64>,
    pub positive: bool,
    pub strictly_decreasing: bool,
}

impl TrendReport {
    pub fn pass(&self) -> bool {
        self.positive && self.strictly_decreasing
    }
}

pub fn holomorphic_sectional_trend(n_max: u32, cache: &TensorCache) -> Result<TrendReport> {
    let values: Vec<f64> = (1..=n_max)
        .map(|n| cache.require([n, n, n, n]).map(|t| 2.0 * t))
        .collect::<Result<_>>()?;
    Ok(TrendReport {
        positive: values.iter().all(|v| *v > 0.0),
        strictly_decreasing: values.windows(2).all(|w| w[1] < w[0]),
        values,
    })
}
