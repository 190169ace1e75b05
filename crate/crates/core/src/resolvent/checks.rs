//! Pointwise and integral properties of the resolvent.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Resolvent;
use crate::disk::{DiskGrid, HarmonicForm};
use crate::error::Result;
use crate::separable::SeparableFunction;

/// Floor used in place of `|μ|²` where `μ` vanishes.
pub const RATIO_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionCheck {
    /// `Re ∫ D(f) f̄ dA`
    pub lhs: f64,
    /// `∫ |f|² dA`
    pub rhs: f64,
    pub pass: bool,
}

pub fn check_contraction(f: &SeparableFunction, resolvent: &Resolvent) -> Result<ContractionCheck> {
    let df = resolvent.apply(f)?;
    let lhs = df.l2_inner(f)?.re;
    let rhs = f.norm_sq()?;
    let pass = lhs >= -1e-9 && lhs <= rhs + 1e-9;
    Ok(ContractionCheck { lhs, rhs, pass })
}

/// `|⟨Df, h⟩ - ⟨f, Dh⟩|` with `⟨a, b⟩ = ∫ a b̄ dA`.
pub fn self_adjoint_residual(f: &SeparableFunction, h: &SeparableFunction, resolvent: &Resolvent) -> Result<f64> {
    let left = resolvent.apply(f)?.l2_inner(h)?;
    let right = f.l2_inner(&resolvent.apply(h)?)?;
    Ok((left - right).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCheck {
    /// `min D(|μ|²)/max(|μ|², ε)` over the grid; `None` when `μ = 0`.
    pub worst_ratio: Option<f64>,
    pub worst_point: Option<(f64, f64)>,
    pub points: usize,
    pub pass: bool,
}

/// Compares `D(|μ|²)` with `|μ|²/3` on a grid.
pub fn check_lower_bound(mu: &HarmonicForm, grid: &DiskGrid, resolvent: &Resolvent) -> Result<LowerBoundCheck> {
    if mu.is_zero() {
        return Ok(LowerBoundCheck { worst_ratio: None, worst_point: None, points: grid.points.len(), pass: true });
    }
    let sq = mu.abs_squared();
    let d = resolvent.apply(&sq)?;
    let mut worst = f64::INFINITY;
    let mut at = Complex64::new(0.0, 0.0);
    for &z in &grid.points {
        let ratio = d.eval(z).re / sq.eval(z).re.max(RATIO_FLOOR);
        if ratio < worst {
            worst = ratio;
            at = z;
        }
    }
    Ok(LowerBoundCheck {
        worst_ratio: Some(worst),
        worst_point: Some((at.re, at.im)),
        points: grid.points.len(),
        pass: worst >= 1.0 / 3.0 - 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_basis_square_contracts() {
        let f = HarmonicForm::basis(1).unwrap().abs_squared();
        let c = check_contraction(&f, &Resolvent::default()).unwrap();
        assert!(c.pass && c.lhs > 0.0 && c.lhs < c.rhs);
        // ∫ D(|μ_1|²)|μ_1|² is the first tensor entry
        assert!((c.lhs - 11.0 / (60.0 * std::f64::consts::PI)).abs() < 1e-14);
    }

    #[test]
    fn zero_input() {
        let c = check_contraction(&SeparableFunction::zero(), &Resolvent::default()).unwrap();
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
        let g = DiskGrid::polar(4, 4, 0.9);
        assert!(check_lower_bound(&HarmonicForm::zero(), &g, &Resolvent::default()).unwrap().pass);
    }

    #[test]
    fn mixed_product_is_positive() {
        let mu1 = HarmonicForm::basis(1).unwrap().to_separable();
        let mu2 = HarmonicForm::basis(2).unwrap().to_separable();
        let mu3 = HarmonicForm::basis(3).unwrap().to_separable();
        let f = mu1.mul(&mu2.conj()).unwrap().add(&mu3.mul(&mu1.conj()).unwrap());
        let c = check_contraction(&f, &Resolvent::default()).unwrap();
        assert!(c.pass && c.lhs > 0.0);
    }

    #[test]
    fn lower_bound_on_sum() {
        let mu = HarmonicForm::from_coeffs(&[(1, Complex64::new(1.0, 0.0)), (4, Complex64::new(1.0, 0.0))]).unwrap();
        let g = DiskGrid::polar(40, 25, 0.99);
        let c = check_lower_bound(&mu, &g, &Resolvent::default()).unwrap();
        assert!(c.pass, "{c:?}");
        assert_eq!(c.points, 1000);
    }
}
