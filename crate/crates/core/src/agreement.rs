//! Cross-checks against the independent implementations in `wp_oracle`:
//! the resolvent by three routes, the quadratic form by direct double
//! quadrature, and the beta-integral inequality in exact rationals.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use wp_oracle::{direct_quadratic_form, fd_resolvent, DirectOracle, DirectSettings, FdGrid, RawWedge};

use crate::disk::HarmonicForm;
use crate::error::{Result, WpError};
use crate::resolvent::{Resolvent, Route};
use crate::separable::{RadialProfile, Term};
use crate::tensor::{compute_block, TensorCache, TensorComputer};
use crate::wedge::{wedge_dimension, wedge_quadratic_form, WedgeVector};

pub const AGREEMENT_TOL: f64 = 1e-6;

/// Sample radii for pointwise comparisons.
const RADII: [f64; 7] = [0.0, 0.15, 0.3, 0.5, 0.7, 0.85, 0.95];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventCase {
    /// Source `μ_a μ̄_b`.
    pub source: [u32; 2],
    pub mode: i32,
    pub max_ode_fd: f64,
    pub max_ode_kernel: f64,
    pub max_fd_kernel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventAgreement {
    pub cases: Vec<ResolventCase>,
    pub max_difference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// The first `count` products `μ_a μ̄_b` with `a ≤ b ≤ 6`, ordered by
/// `(a+b, a)`. Swapping `a, b` only conjugates, so those are skipped.
fn product_sources(count: usize) -> Vec<[u32; 2]> {
    let mut v: Vec<[u32; 2]> = (1..=6).flat_map(|a| (a..=6).map(move |b| [a, b])).collect();
    v.sort_by_key(|[a, b]| (a + b, *a));
    v.truncate(count);
    v
}

fn reduced_source(profile: &RadialProfile, x: f64) -> Result<f64> {
    match profile {
        RadialProfile::Polynomial { decay, coeffs } => {
            Ok((1.0 - x).powi(*decay as i32) * coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c))
        }
        _ => Err(WpError::Domain("finite-difference comparison needs a polynomial source".into())),
    }
}

/// `D(μ_a μ̄_b)` by the ODE route, the finite-difference oracle (Richardson
/// over two grids) and the Green kernel, compared pointwise.
pub fn resolvent_agreement(count: usize) -> Result<ResolventAgreement> {
    let ode = Resolvent::with_route(Route::Ode);
    let kernel = Resolvent::with_route(Route::Kernel);
    let mut cases = Vec::new();
    for [a, b] in product_sources(count) {
        let f = HarmonicForm::basis(a)?.to_separable().mul(&HarmonicForm::basis(b)?.to_separable().conj())?;
        let term: &Term = f.terms.first().ok_or_else(|| WpError::Domain("empty product".into()))?;
        let mode = term.mode;
        let m_abs = mode.unsigned_abs();
        let source = |x: f64| reduced_source(&term.profile, x).unwrap_or(f64::NAN);
        let coarse = fd_resolvent(source, mode, FdGrid::new(20_000))?;
        let fine = fd_resolvent(source, mode, FdGrid::new(40_000))?;
        let by_ode = ode.solve_term(term)?.output;
        let by_kernel = kernel.solve_term(term)?.output;
        let mut case = ResolventCase { source: [a, b], mode, max_ode_fd: 0.0, max_ode_kernel: 0.0, max_fd_kernel: 0.0 };
        for r in RADII {
            let u_ode = by_ode.profile.eval(r, m_abs);
            let u_ker = by_kernel.profile.eval(r, m_abs);
            let u_fd = (4.0 * fine.value_at(r) - coarse.value_at(r)) / 3.0;
            if !(u_ode.is_finite() && u_ker.is_finite() && u_fd.is_finite()) {
                return Err(WpError::Divergent(format!("non-finite resolvent sample at r = {r}")));
            }
            case.max_ode_fd = case.max_ode_fd.max((u_ode - u_fd).abs());
            case.max_ode_kernel = case.max_ode_kernel.max((u_ode - u_ker).abs());
            case.max_fd_kernel = case.max_fd_kernel.max((u_fd - u_ker).abs());
        }
        cases.push(case);
    }
    let max_difference =
        cases.iter().map(|c| c.max_ode_fd.max(c.max_ode_kernel).max(c.max_fd_kernel)).fold(0.0, f64::max);
    Ok(ResolventAgreement { pass: max_difference <= AGREEMENT_TOL, cases, max_difference, tolerance: AGREEMENT_TOL })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormCase {
    pub n: usize,
    pub tensor_form: f64,
    pub direct_form: f64,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormAgreement {
    pub cases: Vec<FormCase>,
    pub max_difference: f64,
    /// Largest δ-refinement spread inside the direct quadrature.
    pub settle_spread: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Random unit wedge vectors, split over truncations `1..=n_max`, evaluated
/// through the tensor cache and through direct quadrature.
pub fn form_agreement(n_max: usize, count: usize, rng: &mut impl Rng) -> Result<FormAgreement> {
    if n_max == 0 || n_max > 3 {
        return Err(WpError::Domain(format!("direct quadrature runs at n in 1..=3, got {n_max}")));
    }
    let computer = TensorComputer::default();
    let mut cache = TensorCache::new(n_max);
    compute_block(n_max as u32, &mut cache, &computer, 0).map_err(|f| f.first_error)?;
    let mut cases = Vec::new();
    let mut settle_spread: f64 = 0.0;
    for n in 1..=n_max {
        let oracle = DirectOracle::build(n, DirectSettings::default())?;
        settle_spread = settle_spread.max(oracle.settle_spread);
        let share = count / n_max + usize::from(n <= count % n_max);
        for _ in 0..share {
            let mut flat: Vec<f64> = (0..wedge_dimension(n)).map(|_| rng.gen::<f64>() - 0.5).collect();
            let norm = flat.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            flat.iter_mut().for_each(|x| *x /= norm);
            let v = WedgeVector::from_flat(n, &flat)?;
            let tensor_form = wedge_quadratic_form(&v, &cache)?;
            let raw = RawWedge { n, a: v.a.clone(), b: v.b.clone(), c: v.c.clone() };
            let direct_form = direct_quadratic_form(&oracle, &raw)?;
            cases.push(FormCase { n, tensor_form, direct_form, difference: (tensor_form - direct_form).abs() });
        }
    }
    let max_difference = cases.iter().map(|c| c.difference).fold(0.0, f64::max);
    Ok(FormAgreement { pass: max_difference <= AGREEMENT_TOL, cases, max_difference, settle_spread, tolerance: AGREEMENT_TOL })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaAgreement {
    pub m_max: u64,
    pub checked: u64,
    pub failures: Vec<u64>,
    /// `min_m 6!m!/(m+7)! ÷ (45/(2^17 m^7))`, rounded for display only.
    pub min_ratio: f64,
    pub pass: bool,
}

/// `6! m!/(m+7)! ≥ 45/(2^17 m^7)` for every `m ≤ m_max`, in exact rationals.
pub fn beta_agreement(m_max: u64) -> Result<BetaAgreement> {
    let r = wp_oracle::beta_suite(m_max)?;
    Ok(BetaAgreement { m_max, pass: r.passed(), checked: r.checked, failures: r.failures, min_ratio: r.min_ratio })
}

/// Harmonic form with coefficients uniform in `[-1/2, 1/2]²` on `labels`.
pub fn random_form(labels: std::ops::RangeInclusive<u32>, rng: &mut impl Rng) -> Result<HarmonicForm> {
    let coeffs: Vec<(u32, Complex64)> =
        labels.map(|k| (k, Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))).collect();
    HarmonicForm::from_coeffs(&coeffs)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;

    #[test]
    fn sources_are_distinct() {
        let s = product_sources(10);
        assert_eq!(s.len(), 10);
        assert_eq!(s[0], [1, 1]);
        assert!(s.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn resolvent_routes_agree_on_two_inputs() {
        let r = resolvent_agreement(2).unwrap();
        assert!(r.pass, "{r:#?}");
    }

    #[test]
    fn form_agrees_at_n1() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let r = form_agreement(1, 3, &mut rng).unwrap();
        assert_eq!(r.cases.len(), 3);
        assert!(r.pass, "{r:#?}");
    }

    #[test]
    fn form_rejects_large_n() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        assert!(form_agreement(4, 1, &mut rng).is_err());
    }

    #[test]
    fn beta_small_range() {
        let b = beta_agreement(50).unwrap();
        assert!(b.pass && b.checked == 50);
    }
}
