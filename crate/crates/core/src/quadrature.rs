//! Gauss–Jacobi rules on `[0, 1]` in the variable `x = r²` with weight
//! `(1 - x)^α`, the natural setting for hyperbolic-area integrals of basis
//! products.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Result, WpError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub alpha: f64,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Number of equispaced angles used by angular cross-checks.
    pub angular_order: usize,
    /// `∫_0^1 (1-x)^α P(x) dx` is exact for polynomials up to this degree.
    pub exact_degree: usize,
}

impl QuadratureRule {
    /// `order`-point rule for `∫_0^1 (1-x)^α f(x) dx`, `α > -1`.
    pub fn gauss_jacobi(order: usize, alpha: f64) -> Result<Self> {
        if order == 0 {
            return Err(WpError::Domain("quadrature order must be >= 1".into()));
        }
        if !(alpha > -1.0) {
            return Err(WpError::Domain(format!("Jacobi exponent must exceed -1, got {alpha}")));
        }
        let beta = 0.0;
        let ab = alpha + beta;
        // Golub–Welsch on [-1, 1] for initial nodes
        let mut jac = DMatrix::<f64>::zeros(order, order);
        for k in 0..order {
            let kf = k as f64;
            jac[(k, k)] = if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
            };
            if k + 1 < order {
                let j = kf + 1.0;
                let s = 2.0 * j + ab;
                let b = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0));
                jac[(k, k + 1)] = b.sqrt();
                jac[(k + 1, k)] = b.sqrt();
            }
        }
        let eig = SymmetricEigen::new(jac);
        let mut ts: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ts.sort_by(|a, b| a.total_cmp(b));

        let mut raw_weights = Vec::with_capacity(order);
        for t in ts.iter_mut() {
            for _ in 0..8 {
                let (p, dp) = jacobi_with_derivative(order, alpha, beta, *t);
                let step = p / dp;
                *t -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = jacobi_with_derivative(order, alpha, beta, *t);
            raw_weights.push(1.0 / ((1.0 - *t * *t) * dp * dp));
        }
        let total: f64 = raw_weights.iter().sum();
        let mass = 1.0 / (alpha + 1.0);
        let nodes = ts.iter().map(|t| 0.5 * (1.0 + t)).collect();
        let weights = raw_weights.iter().map(|w| w / total * mass).collect();
        Ok(Self { alpha, order, nodes, weights, angular_order: 0, exact_degree: 2 * order - 1 })
    }

    /// Shared rule for `(order, α)`; rules are built once per process.
    pub fn cached(order: usize, alpha: f64) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u64), Arc<QuadratureRule>>>> = OnceLock::new();
        let key = (order, alpha.to_bits());
        let cache = CACHE.get_or_init(Default::default);
        if let Some(rule) = cache.lock().expect("quadrature cache poisoned").get(&key) {
            return Ok(rule.clone());
        }
        let rule = Arc::new(Self::gauss_jacobi(order, alpha)?);
        cache.lock().expect("quadrature cache poisoned").insert(key, rule.clone());
        Ok(rule)
    }

    pub fn with_angular_order(mut self, angles: usize) -> Self {
        self.angular_order = angles;
        self
    }

    /// `Σ w_k f(x_k) ≈ ∫_0^1 (1-x)^α f(x) dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Mean of `g` over `angular_order` equispaced angles; exact for
    /// trigonometric polynomials of degree below `angular_order`.
    pub fn angular_mean(&self, g: impl Fn(f64) -> f64) -> f64 {
        let n = self.angular_order.max(1);
        (0..n).map(|k| g(std::f64::consts::TAU * k as f64 / n as f64)).sum::<f64>() / n as f64
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `P_n^{(α,β)}(t)` and its derivative.
fn jacobi_with_derivative(n: usize, alpha: f64, beta: f64, t: f64) -> (f64, f64) {
    let ab = alpha + beta;
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (alpha - beta + (ab + 2.0) * t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let a1 = 2.0 * kf * (kf + ab) * (s - 2.0);
        let a2 = (s - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (s - 2.0) * (s - 1.0) * s;
        let a4 = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * s;
        let p2 = ((a2 + a3 * t) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let s = 2.0 * nf + ab;
    let dp = (nf * (alpha - beta - s * t) * p1 + 2.0 * (nf + alpha) * (nf + beta) * p0) / (s * (1.0 - t * t));
    (p1, dp)
}
