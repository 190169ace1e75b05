//! Functions on the disk of the form `Σ c · g(r) · e^{imθ}`.
//!
//! Basis products and their images under the resolvent all live in this
//! class. Angular integrals are never sampled: a product of two terms
//! integrates to zero unless the modes cancel, and otherwise contributes
//! `2π` times a radial integral done by Gauss–Jacobi in `x = r²`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Result, WpError};
use crate::quadrature::QuadratureRule;

/// Order used for radial integrals that are not plain polynomials.
pub const GENERAL_ORDER: usize = 96;

/// Radial profile `g(r)` of a separable term.
#[derive(Clone)]
pub enum RadialProfile {
    /// `r^{|m|} (1-x)^decay Σ_k coeffs[k] x^k` with `x = r²`.
    Polynomial { decay: u32, coeffs: Vec<f64> },
    Sampled(SampledProfile),
    /// Evaluated on demand, e.g. by kernel quadrature.
    Lazy(LazyProfile),
}

/// Samples on a uniform grid in hyperbolic radius `t = 2 artanh r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    pub step: f64,
    pub values: Vec<f64>,
    /// Profile behaves like `(1-r²)^decay` near the boundary.
    pub decay: u32,
}

#[derive(Clone)]
pub struct LazyProfile {
    pub decay: u32,
    pub eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Polynomial { decay, coeffs } => {
                f.debug_struct("Polynomial").field("decay", decay).field("coeffs", coeffs).finish()
            }
            Self::Sampled(s) => f
                .debug_struct("Sampled")
                .field("step", &s.step)
                .field("len", &s.values.len())
                .field("decay", &s.decay)
                .finish(),
            Self::Lazy(l) => f.debug_struct("Lazy").field("decay", &l.decay).finish(),
        }
    }
}

impl SampledProfile {
    pub fn new(step: f64, values: Vec<f64>, decay: u32) -> Result<Self> {
        if values.len() < 4 || !(step > 0.0) {
            return Err(WpError::Domain("sampled profile needs >= 4 samples and a positive step".into()));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(WpError::Unbounded { index });
        }
        Ok(Self { step, values, decay })
    }

    pub fn t_max(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    /// Value at hyperbolic radius `t`, cubic Lagrange interpolation inside
    /// the grid and `(1-r²)^decay` scaling beyond it.
    pub fn at_t(&self, t: f64) -> f64 {
        let last = self.values.len() - 1;
        let t_max = self.t_max();
        if t >= t_max {
            let tail = self.values[last];
            if self.decay == 0 {
                return tail;
            }
            // 1 - r² = 1/cosh²(t/2)
            let ratio = (0.5 * t_max).cosh() / (0.5 * t).cosh();
            return tail * ratio.powi(2 * self.decay as i32);
        }
        let pos = t / self.step;
        let base = (pos.floor() as usize).saturating_sub(1).min(last - 3);
        let mut value = 0.0;
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (pos - (base + b) as f64) / (a as f64 - b as f64);
                }
            }
            value += w * self.values[base + a];
        }
        value
    }
}

impl RadialProfile {
    pub fn constant(c: f64) -> Self {
        Self::Polynomial { decay: 0, coeffs: vec![c] }
    }

    pub fn decay(&self) -> u32 {
        match self {
            Self::Polynomial { decay, .. } => *decay,
            Self::Sampled(s) => s.decay,
            Self::Lazy(l) => l.decay,
        }
    }

    /// `g(r)`; `m_abs` only matters for the polynomial representation.
    pub fn eval(&self, r: f64, m_abs: u32) -> f64 {
        match self {
            Self::Polynomial { decay, coeffs } => {
                let x = r * r;
                let poly = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
                r.powi(m_abs as i32) * (1.0 - x).powi(*decay as i32) * poly
            }
            Self::Sampled(s) => s.at_t(2.0 * r.atanh()),
            Self::Lazy(l) => (l.eval)(r),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Self::Polynomial { coeffs, .. } if coeffs.iter().all(|c| *c == 0.0))
    }
}

/// One term `coeff · g(r) · e^{i·mode·θ}`.
#[derive(Debug, Clone)]
pub struct Term {
    pub coeff: Complex64,
    pub mode: i32,
    pub profile: Arc<RadialProfile>,
}

impl Term {
    pub fn new(coeff: Complex64, mode: i32, profile: RadialProfile) -> Self {
        Self { coeff, mode, profile: Arc::new(profile) }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let (r, theta) = z.to_polar();
        self.coeff * self.profile.eval(r, self.mode.unsigned_abs()) * Complex64::from_polar(1.0, self.mode as f64 * theta)
    }

    pub fn conj(&self) -> Self {
        Self { coeff: self.coeff.conj(), mode: -self.mode, profile: self.profile.clone() }
    }

    /// Pointwise product; both profiles must be polynomial.
    pub fn mul(&self, other: &Term) -> Result<Term> {
        let (
            RadialProfile::Polynomial { decay: q1, coeffs: c1 },
            RadialProfile::Polynomial { decay: q2, coeffs: c2 },
        ) = (self.profile.as_ref(), other.profile.as_ref())
        else {
            return Err(WpError::Domain("products are only formed for polynomial profiles".into()));
        };
        let mode = self.mode + other.mode;
        // r^{|m1|} r^{|m2|} = r^{|m1+m2|} x^shift
        let shift = ((self.mode.unsigned_abs() + other.mode.unsigned_abs() - mode.unsigned_abs()) / 2) as usize;
        let mut coeffs = vec![0.0; shift + c1.len() + c2.len() - 1];
        for (a, x) in c1.iter().enumerate() {
            for (b, y) in c2.iter().enumerate() {
                coeffs[shift + a + b] += x * y;
            }
        }
        Ok(Term::new(self.coeff * other.coeff, mode, RadialProfile::Polynomial { decay: q1 + q2, coeffs }))
    }
}

/// `4π ∫_0^1 g1 g2 / (1-x)² dx`, the radial part of `∫ f1 f2 dA` for terms
/// whose modes cancel.
fn radial_pair(t1: &Term, t2: &Term, order: usize) -> Result<f64> {
    let m_abs = t1.mode.unsigned_abs();
    let q = t1.profile.decay() + t2.profile.decay();
    if q < 2 {
        return Err(WpError::Divergent(format!(
            "combined boundary decay {q} is too weak for a finite hyperbolic integral"
        )));
    }
    let alpha = q as f64 - 2.0;
    if let (
        RadialProfile::Polynomial { coeffs: c1, .. },
        RadialProfile::Polynomial { coeffs: c2, .. },
    ) = (t1.profile.as_ref(), t2.profile.as_ref())
    {
        // integrand is x^{|m|} P1 P2 against (1-x)^α: pick an exact rule
        let degree = m_abs as usize + c1.len() + c2.len() - 2;
        let rule = QuadratureRule::cached(degree / 2 + 1, alpha)?;
        let s = rule.integrate(|x| {
            let p1 = c1.iter().rev().fold(0.0, |acc, c| acc * x + c);
            let p2 = c2.iter().rev().fold(0.0, |acc, c| acc * x + c);
            x.powi(m_abs as i32) * p1 * p2
        });
        return Ok(4.0 * PI * s);
    }
    let rule = QuadratureRule::cached(order, alpha)?;
    let s = rule.integrate(|x| {
        let r = x.sqrt();
        let g = t1.profile.eval(r, m_abs) * t2.profile.eval(r, m_abs);
        g / (1.0 - x).powi(q as i32)
    });
    Ok(4.0 * PI * s)
}

/// Finite sum of separable terms.
#[derive(Debug, Clone, Default)]
pub struct SeparableFunction {
    pub terms: Vec<Term>,
}

impl SeparableFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self { terms: vec![Term::new(Complex64::new(1.0, 0.0), 0, RadialProfile::constant(c))] }
    }

    pub fn from_terms(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(z)).sum()
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(Term::conj).collect() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coeff: t.coeff * c, ..t.clone() })
            .collect();
        Self { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b)?);
            }
        }
        Ok(Self { terms })
    }

    pub fn modes(&self) -> Vec<i32> {
        let mut m: Vec<i32> = self.terms.iter().map(|t| t.mode).collect();
        m.sort_unstable();
        m.dedup();
        m
    }

    /// `∫ f g dA` with the default order for non-polynomial profiles.
    pub fn bilinear(&self, other: &Self) -> Result<Complex64> {
        self.bilinear_with_order(other, GENERAL_ORDER)
    }

    pub fn bilinear_with_order(&self, other: &Self, order: usize) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for a in &self.terms {
            for b in &other.terms {
                // angular orthogonality decides the pair exactly
                if a.mode + b.mode != 0 || a.profile.is_zero() || b.profile.is_zero() {
                    continue;
                }
                let c = a.coeff * b.coeff;
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                total += c * radial_pair(a, b, order)?;
            }
        }
        Ok(total)
    }

    /// `∫ f ḡ dA`.
    pub fn l2_inner(&self, other: &Self) -> Result<Complex64> {
        self.bilinear(&other.conj())
    }

    pub fn norm_sq(&self) -> Result<f64> {
        Ok(self.l2_inner(self)?.re)
    }
}
