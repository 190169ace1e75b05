//! Poincaré disk geometry and the orthonormal basis of harmonic Beltrami
//! differentials `μ = amp · (1-|z|²)² · z̄^p`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WpError};
use crate::separable::{RadialProfile, SeparableFunction, Term};

/// `√(3/(4π))`, the pointwise bound for unit-norm harmonic forms.
pub fn harnack_constant() -> f64 {
    (3.0 / (4.0 * PI)).sqrt()
}

/// Poincaré density `ρ(z) = 4 / (1-|z|²)²`.
pub fn density(z: Complex64) -> f64 {
    4.0 / (1.0 - z.norm_sqr()).powi(2)
}

pub fn hyperbolic_distance(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm();
    let den = (Complex64::new(1.0, 0.0) - z.conj() * w).norm();
    2.0 * (num / den).atanh()
}

/// Basis element labelled by `n ≥ 2`: `p = n-2`,
/// amplitude `(1/4)√((2n³-2n)/π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisElement {
    pub n: u32,
    pub p: u32,
    pub amplitude: f64,
}

pub fn basis_element(n: u32) -> Result<BasisElement> {
    if n < 2 {
        return Err(WpError::Domain(format!("basis label must be >= 2, got {n}")));
    }
    let nf = n as f64;
    let amplitude = 0.25 * ((2.0 * nf.powi(3) - 2.0 * nf) / PI).sqrt();
    Ok(BasisElement { n, p: n - 2, amplitude })
}

impl BasisElement {
    /// The element with tensor index `i ≥ 1` (power `i-1`).
    pub fn with_index(i: u32) -> Result<Self> {
        if i < 1 {
            return Err(WpError::Domain("tensor indices start at 1".into()));
        }
        basis_element(i + 1)
    }

    pub fn index(&self) -> u32 {
        self.n - 1
    }

    /// Angular mode: `z̄^p` carries `e^{-ipθ}`.
    pub fn mode(&self) -> i32 {
        -(self.p as i32)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.amplitude * (1.0 - z.norm_sqr()).powi(2) * z.conj().powu(self.p)
    }

    pub fn term(&self) -> Term {
        Term::new(
            Complex64::new(self.amplitude, 0.0),
            self.mode(),
            RadialProfile::Polynomial { decay: 2, coeffs: vec![1.0] },
        )
    }

    /// Value of `sup |μ|`, attained where `r² = p/(p+4)`.
    pub fn sup_norm(&self) -> f64 {
        let p = self.p as f64;
        let x = p / (p + 4.0);
        self.amplitude * (1.0 - x).powi(2) * x.powf(0.5 * p)
    }
}

/// Finite combination `Σ c_i μ_i`, keyed by tensor index `i ≥ 1`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HarmonicForm {
    pub coeffs: BTreeMap<u32, Complex64>,
}

impl HarmonicForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: u32) -> Result<Self> {
        Self::from_coeffs(&[(i, Complex64::new(1.0, 0.0))])
    }

    pub fn from_coeffs(coeffs: &[(u32, Complex64)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(i, c) in coeffs {
            if i < 1 {
                return Err(WpError::Domain("tensor indices start at 1".into()));
            }
            *map.entry(i).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Ok(Self { coeffs: map })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.norm() == 0.0)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&i, &c)| (i, c * s)).collect() }
    }

    fn elements(&self) -> impl Iterator<Item = (BasisElement, Complex64)> + '_ {
        self.coeffs
            .iter()
            .map(|(&i, &c)| (BasisElement::with_index(i).expect("validated index"), c))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.elements().map(|(e, c)| c * e.eval(z)).sum()
    }

    pub fn to_separable(&self) -> SeparableFunction {
        let terms = self
            .elements()
            .map(|(e, c)| {
                let mut t = e.term();
                t.coeff *= c;
                t
            })
            .collect();
        SeparableFunction::from_terms(terms)
    }

    /// `|μ|²` as a separable function (one term per ordered pair).
    pub fn abs_squared(&self) -> SeparableFunction {
        let f = self.to_separable();
        f.mul(&f.conj()).expect("basis profiles are polynomial")
    }

    /// Coefficient norm, equal to the WP norm by orthonormality.
    pub fn coefficient_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Petersson pairing `⟨f, g⟩ = ∫ f ḡ dA`.
pub fn wp_inner(f: &HarmonicForm, g: &HarmonicForm) -> Result<Complex64> {
    f.to_separable().l2_inner(&g.to_separable())
}

pub fn wp_norm(f: &HarmonicForm) -> Result<f64> {
    Ok(wp_inner(f, f)?.re.max(0.0).sqrt())
}

/// `sup_{z∈𝔻} |μ(z)|`. Single elements use the closed-form maximizer;
/// combinations use a polar grid followed by local refinement.
pub fn sup_norm(mu: &HarmonicForm) -> Result<f64> {
    let live: Vec<_> = mu.coeffs.iter().filter(|(_, c)| c.norm() > 0.0).collect();
    match live.len() {
        0 => Ok(0.0),
        1 => {
            let (&i, c) = live[0];
            Ok(c.norm() * BasisElement::with_index(i)?.sup_norm())
        }
        _ => Ok(grid_sup(mu)),
    }
}

fn grid_sup(mu: &HarmonicForm) -> f64 {
    let max_p = mu.coeffs.keys().max().copied().unwrap_or(1) as usize;
    let n_r = 200;
    let n_theta = 64 + 16 * max_p;
    let f = |r: f64, t: f64| mu.eval(Complex64::from_polar(r, t)).norm();
    let mut candidates: Vec<(f64, f64, f64)> = Vec::with_capacity(n_r * n_theta);
    for a in 0..n_r {
        let r = a as f64 / n_r as f64;
        for b in 0..n_theta {
            let t = std::f64::consts::TAU * b as f64 / n_theta as f64;
            candidates.push((f(r, t), r, t));
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (mut dr, mut dt) = (1.0 / n_r as f64, std::f64::consts::TAU / n_theta as f64);
    let mut best: Vec<(f64, f64, f64)> = candidates.into_iter().take(8).collect();
    // pattern search around the best grid points
    for _ in 0..60 {
        for cand in best.iter_mut() {
            let (_, r0, t0) = *cand;
            for (sr, st) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
                let r = (r0 + sr * dr).clamp(0.0, 1.0 - 1e-12);
                let t = t0 + st * dt;
                let v = f(r, t);
                if v > cand.0 {
                    *cand = (v, r, t);
                }
            }
        }
        dr *= 0.7;
        dt *= 0.7;
    }
    best.iter().map(|c| c.0).fold(0.0, f64::max)
}

/// Polar sampling grid for pointwise checks.
#[derive(Debug, Clone)]
pub struct DiskGrid {
    pub points: Vec<Complex64>,
}

impl DiskGrid {
    /// `n_r × n_theta` points with radii spread over `[0, r_max]`.
    pub fn polar(n_r: usize, n_theta: usize, r_max: f64) -> Self {
        let mut points = Vec::with_capacity(n_r * n_theta);
        for a in 0..n_r {
            let r = r_max * a as f64 / (n_r.max(2) - 1) as f64;
            for b in 0..n_theta {
                let t = std::f64::consts::TAU * (b as f64 + 0.5 * (a % 2) as f64) / n_theta as f64;
                points.push(Complex64::from_polar(r, t));
            }
        }
        Self { points }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_elements() {
        let e = basis_element(2).unwrap();
        assert_eq!(e.p, 0);
        assert!((e.amplitude - 0.25 * (12.0 / PI).sqrt()).abs() < 1e-15);
        assert!((e.amplitude - 0.488602).abs() < 1e-6);
        let e3 = basis_element(3).unwrap();
        assert_eq!(e3.p, 1);
        assert!((e3.amplitude - 0.25 * (48.0 / PI).sqrt()).abs() < 1e-15);
        assert!(basis_element(1).is_err());
    }

    #[test]
    fn orthonormal_pairs() {
        for i in 1..=6u32 {
            for j in 1..=6u32 {
                let v = wp_inner(&HarmonicForm::basis(i).unwrap(), &HarmonicForm::basis(j).unwrap()).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).norm() < 1e-12, "({i},{j}) -> {v}");
                if i != j {
                    assert_eq!(v, Complex64::new(0.0, 0.0));
                }
            }
        }
        let zero = wp_inner(&HarmonicForm::zero(), &HarmonicForm::basis(3).unwrap()).unwrap();
        assert_eq!(zero, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn sup_of_first_element_is_harnack_constant() {
        let mu = HarmonicForm::basis(1).unwrap();
        assert!((sup_norm(&mu).unwrap() - harnack_constant()).abs() < 1e-15);
        let two = mu.scale(Complex64::new(2.0, 0.0));
        assert!((sup_norm(&two).unwrap() - 2.0 * harnack_constant()).abs() < 1e-15);
    }

    #[test]
    fn grid_sup_agrees_with_closed_form() {
        // same element split into two coefficients goes through the grid path
        let mu = HarmonicForm::from_coeffs(&[(3, Complex64::new(1.0, 0.0)), (1, Complex64::new(0.0, 0.0))]).unwrap();
        let mut forced = mu.clone();
        forced.coeffs.insert(2, Complex64::new(1e-300, 0.0));
        let grid = sup_norm(&forced).unwrap();
        let exact = sup_norm(&mu).unwrap();
        assert!((grid - exact).abs() < 1e-10, "{grid} vs {exact}");
    }

    #[test]
    fn distance_is_symmetric() {
        let z = Complex64::new(0.3, -0.2);
        let w = Complex64::new(-0.5, 0.4);
        assert!((hyperbolic_distance(z, w) - hyperbolic_distance(w, z)).abs() < 1e-14);
        let r: f64 = 0.5;
        assert!((hyperbolic_distance(Complex64::new(0.0, 0.0), Complex64::new(r, 0.0)) - ((1.0 + r) / (1.0 - r)).ln()).abs() < 1e-14);
    }
}
