//! Curvature operator of the Weil-Petersson metric on universal Teichmüller
//! space, restricted to finite truncations of the orthonormal basis of
//! harmonic Beltrami differentials on the Poincaré disk.
//!
//! Pipeline: [`disk`] basis and geometry, [`resolvent`] for
//! `D = -2(Δ-2)^{-1}`, [`tensor`] for `T[i,j,k,l] = ∫ D(μ_i μ̄_j) μ_k μ̄_l dA`,
//! [`wedge`] for the quadratic form on `∧²`, [`spectral`] for eigenvalue
//! verdicts, and [`report`] / [`cli`] for orchestration.

pub mod agreement;
pub mod cli;
pub mod config;
pub mod disk;
pub mod error;
pub mod plots;
pub mod quadrature;
pub mod report;
pub mod resolvent;
pub mod separable;
pub mod spectral;
pub mod tensor;
pub mod verification;
pub mod wedge;

pub use error::{Result, WpError};
