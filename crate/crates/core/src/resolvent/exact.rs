//! Closed-form resolvent for polynomial sources.
//!
//! A source `r^{|m|} (1-x)^q R(x)` with `q ≥ 3` has the bounded solution
//! `r^{|m|} (1-x)² Q(x)` where `Q` is a polynomial of the same degree as
//! `(1-x)^{q-3} R`. Substituting gives
//! `x(1-x)Q'' + [(m+1) - (m+5)x]Q' - 2(m+2)Q = -2(1-x)^{q-3} R`,
//! and the operator on the left maps `x^k` to
//! `k(k+m) x^{k-1} - (k+2)(k+m+2) x^k`, so `Q` follows from a downward
//! recurrence that only ever divides by positive numbers.

use crate::error::{Result, WpError};

/// Coefficients of `Q` for the source `r^{|m|} (1-x)^decay Σ coeffs[k] x^k`.
pub fn solve_polynomial(m_abs: u32, decay: u32, coeffs: &[f64]) -> Result<Vec<f64>> {
    if decay < 3 {
        return Err(WpError::Domain(format!("closed form needs boundary decay >= 3, got {decay}")));
    }
    // rhs = -2 (1-x)^{decay-3} R
    let mut rhs = coeffs.iter().map(|c| -2.0 * c).collect::<Vec<_>>();
    for _ in 0..decay - 3 {
        let mut next = vec![0.0; rhs.len() + 1];
        for (k, c) in rhs.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c;
        }
        rhs = next;
    }
    let m = m_abs as f64;
    let d = rhs.len();
    let mut q = vec![0.0; d];
    let mut above = 0.0;
    for k in (0..d).rev() {
        let kf = k as f64;
        let lift = (kf + 1.0) * (kf + 1.0 + m) * above;
        q[k] = (lift - rhs[k]) / ((kf + 2.0) * (kf + m + 2.0));
        above = q[k];
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply_operator(m: f64, q: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; q.len()];
        for (k, c) in q.iter().enumerate() {
            let kf = k as f64;
            if k > 0 {
                out[k - 1] += c * kf * (kf + m);
            }
            out[k] -= c * (kf + 2.0) * (kf + m + 2.0);
        }
        out
    }

    #[test]
    fn first_basis_square() {
        // D((1-x)^4) = (2/9)(1-x)²(2-x)
        let q = solve_polynomial(0, 4, &[1.0]).unwrap();
        assert!((q[0] - 4.0 / 9.0).abs() < 1e-15);
        assert!((q[1] + 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn residual_vanishes() {
        let coeffs = [0.3, -1.2, 0.7, 2.0];
        for m in 0..5u32 {
            let q = solve_polynomial(m, 3, &coeffs).unwrap();
            let lq = apply_operator(m as f64, &q);
            for (a, b) in lq.iter().zip(coeffs.iter().map(|c| -2.0 * c)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weak_decay_rejected() {
        assert!(solve_polynomial(0, 2, &[1.0]).is_err());
    }
}
