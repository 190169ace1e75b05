//! Reference computations kept deliberately separate from `wp-curvature`.
//!
//! Nothing here shares numerical code with the main pipeline: the quadrature,
//! the Green kernel evaluation, the finite-difference discretization and the
//! basis evaluation are all written again from scratch.

mod error;
pub mod direct;
pub mod fd;
pub mod gauss;
pub mod green;
pub mod rational;

pub use direct::{direct_quadratic_form, DirectOracle, DirectSettings, RawWedge};
pub use error::OracleError;
pub use fd::{fd_resolvent, FdGrid, FdSolution};
pub use rational::{
    beta_integral_exact, beta_lower_bound, beta_suite, check_beta_bound, cube_sum_threshold,
    dyadic_cube_sum, first_cube_sum_index, BetaSuiteReport, RationalValue,
};
