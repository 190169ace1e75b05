use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::OracleError;

/// Exact rational number, always reduced with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RationalValue(BigRational);

impl RationalValue {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self, OracleError> {
        if denom.is_zero() {
            return Err(OracleError::Domain("zero denominator".into()));
        }
        Ok(Self(BigRational::new(numer, denom)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RationalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// `∫_0^1 (1-r)^6 r^m dr = 6! m! / (m+7)!`, evaluated as `720 / ((m+1)…(m+7))`.
pub fn beta_integral_exact(m: u64) -> Result<RationalValue, OracleError> {
    if m < 1 {
        return Err(OracleError::Domain(format!("m must be >= 1, got {m}")));
    }
    let mut denom = BigInt::one();
    for k in 1..=7u64 {
        denom *= BigInt::from(m + k);
    }
    RationalValue::new(BigInt::from(720u32), denom)
}

/// `45 / (2^17 m^7)`.
pub fn beta_lower_bound(m: u64) -> Result<RationalValue, OracleError> {
    if m < 1 {
        return Err(OracleError::Domain(format!("m must be >= 1, got {m}")));
    }
    let denom = (BigInt::one() << 17u32) * num_traits::pow(BigInt::from(m), 7);
    RationalValue::new(BigInt::from(45u32), denom)
}

pub fn check_beta_bound(m: u64) -> Result<bool, OracleError> {
    Ok(beta_integral_exact(m)? >= beta_lower_bound(m)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaSuiteReport {
    pub checked: u64,
    pub failures: Vec<u64>,
    /// Smallest observed integral / bound ratio (informational only).
    pub min_ratio: f64,
}

impl BetaSuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn beta_suite(m_max: u64) -> Result<BetaSuiteReport, OracleError> {
    let mut failures = Vec::new();
    let mut min_ratio = f64::INFINITY;
    for m in 1..=m_max {
        let lhs = beta_integral_exact(m)?;
        let rhs = beta_lower_bound(m)?;
        if lhs < rhs {
            failures.push(m);
        }
        let ratio = (lhs.as_ratio() / rhs.as_ratio()).to_f64().unwrap_or(f64::NAN);
        min_ratio = min_ratio.min(ratio);
    }
    Ok(BetaSuiteReport { checked: m_max, failures, min_ratio })
}

/// `Σ_{k=2^i}^{2^{i+1}-1} (k+1)^3`.
pub fn dyadic_cube_sum(i: u32) -> BigUint {
    let lo = BigUint::one() << i;
    let hi = BigUint::one() << (i + 1);
    let mut k = lo;
    let mut total = BigUint::zero();
    while k < hi {
        let kp = &k + 1u32;
        total += &kp * &kp * &kp;
        k += 1u32;
    }
    total
}

/// `3 · 2^{4i}`.
pub fn cube_sum_threshold(i: u32) -> BigUint {
    BigUint::from(3u32) << (4 * i)
}

/// Smallest `i0` such that the dyadic cube sum beats `3·2^{4i}` for every
/// `i` in `i0..=i_max`.
pub fn first_cube_sum_index(i_max: u32) -> Option<u32> {
    let mut first = None;
    for i in (0..=i_max).rev() {
        if dyadic_cube_sum(i) > cube_sum_threshold(i) {
            first = Some(i);
        } else {
            break;
        }
    }
    first
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_one_is_one_fifty_sixth() {
        let v = beta_integral_exact(1).unwrap();
        assert_eq!(v.to_string(), "1/56");
        assert!(check_beta_bound(1).unwrap());
    }

    #[test]
    fn zero_is_rejected() {
        assert!(beta_integral_exact(0).is_err());
        assert!(beta_lower_bound(0).is_err());
    }

    #[test]
    fn matches_factorial_form() {
        // 6! m! / (m+7)! computed the long way for a few m
        for m in [1u64, 2, 5, 13] {
            let fact = |n: u64| (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k));
            let direct = RationalValue::new(fact(6) * fact(m), fact(m + 7)).unwrap();
            assert_eq!(direct, beta_integral_exact(m).unwrap());
        }
    }

    #[test]
    fn denominator_positive_and_reduced() {
        let v = RationalValue::new(BigInt::from(6), BigInt::from(-4)).unwrap();
        assert_eq!(v.to_string(), "-3/2");
    }

    #[test]
    fn cube_sums_small() {
        assert_eq!(dyadic_cube_sum(0), BigUint::from(8u32));
        assert_eq!(dyadic_cube_sum(1), BigUint::from(91u32));
        assert_eq!(dyadic_cube_sum(2), BigUint::from(1196u32));
        assert_eq!(first_cube_sum_index(12), Some(0));
    }
}
