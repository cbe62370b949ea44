//! Numeric substrate: dense linear algebra, Gaussian special functions,
//! adaptive quadrature and derivative-free maximisation.
//!
//! Everything here is a pure function of its arguments.

pub mod linalg;
pub mod optimize;
pub mod quadrature;
pub mod special;

pub use linalg::{determinant, simplex_volume, solve_linear, Matrix};
pub use optimize::{maximize_1d, maximize_1d_grid, maximize_box, maximize_box_grid, Candidate, MaximizeResult};
pub use quadrature::{integrate_1d, integrate_1d_with_breaks, QuadratureResult};
pub use special::{binomial, log_binomial, log_gamma, std_normal_cdf, std_normal_pdf, std_normal_sf};
