//! Seeded property suites for the analytic inequalities: orthonormality, the
//! resolvent identities, contraction, the pointwise lower bound, the
//! Harnack inequality and the `J∘` kernel.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::agreement::random_form;
use crate::disk::{harnack_constant, sup_norm, wp_inner, wp_norm, DiskGrid, HarmonicForm};
use crate::error::Result;
use crate::resolvent::{check_contraction, check_lower_bound, self_adjoint_residual, Resolvent, Route};
use crate::separable::SeparableFunction;
use crate::tensor::TensorCache;
use crate::wedge::{j_action, wedge_dimension, wedge_quadratic_form, WedgeVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalityCheck {
    pub labels: [u32; 2],
    /// `max |⟨μ_i, μ_j⟩ - δ_ij|`
    pub max_deviation: f64,
    pub pass: bool,
}

/// Gram matrix of `μ_first..=μ_last` in the Petersson pairing.
pub fn orthonormality(first: u32, last: u32) -> Result<OrthonormalityCheck> {
    let forms: Vec<HarmonicForm> = (first..=last).map(HarmonicForm::basis).collect::<Result<_>>()?;
    let mut max_deviation: f64 = 0.0;
    for (a, f) in forms.iter().enumerate() {
        for (b, g) in forms.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((wp_inner(f, g)? - target).norm());
        }
    }
    Ok(OrthonormalityCheck { labels: [first, last], max_deviation, pass: max_deviation <= 1e-10 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventIdentities {
    /// `max |D(1) - 1|` over routes and sample radii.
    pub constant_error: f64,
    /// `max |∫G(z,·)dA - 1|` over sample radii.
    pub unit_mass_error: f64,
    pub pairs: usize,
    pub max_self_adjoint_residual: f64,
    pub pass: bool,
}

fn random_product(rng: &mut impl Rng) -> Result<SeparableFunction> {
    let hi = rng.gen_range(1..=5);
    let mu = random_form(1..=hi, rng)?.to_separable();
    let nu = random_form(1..=rng.gen_range(1..=5), rng)?.to_separable();
    mu.mul(&nu.conj())
}

pub fn resolvent_identities(pairs: usize, rng: &mut impl Rng) -> Result<ResolventIdentities> {
    let radii = [0.0, 0.3, 0.6, 0.9, 0.99];
    let one = SeparableFunction::constant(1.0);
    let mut constant_error: f64 = 0.0;
    for route in [Route::Exact, Route::Ode, Route::Kernel] {
        let d1 = Resolvent::with_route(route).apply(&one)?;
        for r in radii {
            constant_error = constant_error.max((d1.eval(Complex64::new(r, 0.0)) - 1.0).norm());
        }
    }
    let kernel = Resolvent::with_route(Route::Kernel).kernel();
    let unit_mass_error = radii.iter().map(|&r| (kernel.unit_mass(r) - 1.0).abs()).fold(0.0, f64::max);
    let resolvent = Resolvent::default();
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let f = random_product(rng)?;
        let h = random_product(rng)?;
        worst = worst.max(self_adjoint_residual(&f, &h, &resolvent)?);
    }
    Ok(ResolventIdentities {
        constant_error,
        unit_mass_error,
        pairs,
        max_self_adjoint_residual: worst,
        pass: constant_error <= 1e-10 && unit_mass_error <= 1e-8 && worst <= 1e-8,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionSuite {
    pub inputs: usize,
    /// Smallest `⟨Df, f⟩`.
    pub min_lhs: f64,
    /// Largest `⟨Df, f⟩ - ‖f‖²`.
    pub max_excess: f64,
    pub pass: bool,
}

pub fn contraction_suite(inputs: usize, rng: &mut impl Rng) -> Result<ContractionSuite> {
    let resolvent = Resolvent::default();
    let (mut min_lhs, mut max_excess, mut pass) = (f64::INFINITY, f64::NEG_INFINITY, true);
    for _ in 0..inputs {
        let c = check_contraction(&random_product(rng)?, &resolvent)?;
        min_lhs = min_lhs.min(c.lhs);
        max_excess = max_excess.max(c.lhs - c.rhs);
        pass &= c.pass;
    }
    Ok(ContractionSuite { inputs, min_lhs, max_excess, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundSuite {
    pub forms: usize,
    pub points_per_form: usize,
    /// Smallest `D(|μ|²)/|μ|²` seen; the claim is `≥ 1/3`.
    pub worst_ratio: f64,
    pub pass: bool,
}

/// `D(|μ|²) ≥ |μ|²/3` on a 40×25 polar grid for random forms.
pub fn lower_bound_suite(forms: usize, rng: &mut impl Rng) -> Result<LowerBoundSuite> {
    let resolvent = Resolvent::default();
    let grid = DiskGrid::polar(40, 25, 0.99);
    let (mut worst_ratio, mut pass) = (f64::INFINITY, true);
    for _ in 0..forms {
        let mu = random_form(1..=rng.gen_range(1..=8), rng)?;
        let c = check_lower_bound(&mu, &grid, &resolvent)?;
        if let Some(r) = c.worst_ratio {
            worst_ratio = worst_ratio.min(r);
        }
        pass &= c.pass;
    }
    Ok(LowerBoundSuite { forms, points_per_form: grid.points.len(), worst_ratio, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnackSuite {
    pub combinations: usize,
    /// Largest `sup|μ| - √(3/(4π))‖μ‖`.
    pub max_excess: f64,
    /// `|sup|μ_1| - √(3/(4π))|`
    pub equality_gap: f64,
    pub pass: bool,
}

pub fn harnack_suite(combinations: usize, rng: &mut impl Rng) -> Result<HarnackSuite> {
    let c = harnack_constant();
    let mut max_excess = f64::NEG_INFINITY;
    for _ in 0..combinations {
        let mu = random_form(1..=rng.gen_range(1..=6), rng)?;
        max_excess = max_excess.max(sup_norm(&mu)? - c * wp_norm(&mu)?);
    }
    let first = HarmonicForm::basis(1)?;
    let equality_gap = (sup_norm(&first)? - c * wp_norm(&first)?).abs();
    Ok(HarnackSuite { combinations, max_excess, equality_gap, pass: max_excess <= 1e-10 && equality_gap <= 1e-10 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelProbes {
    pub n: usize,
    pub probes: usize,
    /// Largest `|Q̃(C, C)|` over `C = E - J∘E`, `|E| = 1`.
    pub max_abs_form: f64,
    pub pass: bool,
}

pub fn kernel_probes(n: usize, probes: usize, cache: &TensorCache, rng: &mut impl Rng) -> Result<KernelProbes> {
    let mut max_abs_form: f64 = 0.0;
    for _ in 0..probes {
        let mut flat: Vec<f64> = (0..wedge_dimension(n)).map(|_| rng.gen::<f64>() - 0.5).collect();
        let norm = flat.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        flat.iter_mut().for_each(|x| *x /= norm);
        let e = WedgeVector::from_flat(n, &flat)?;
        let c = e.axpy(-1.0, &j_action(&e))?;
        max_abs_form = max_abs_form.max(wedge_quadratic_form(&c, cache)?.abs());
    }
    Ok(KernelProbes { n, probes, max_abs_form, pass: max_abs_form <= 1e-8 })
}
