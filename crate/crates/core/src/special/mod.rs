//! Exponential integral, the `Psi` kernel, and the adaptive quadrature used by
//! every analytic expression in the crate.

mod ei;
mod quadrature;

pub use ei::{exp_integral_e1, exp_integral_ei, psi};
pub(crate) use ei::psi_kernel;
pub(crate) use quadrature::try_integrate_halfline;
pub use quadrature::{
    integrate_halfline, integrate_halfline_scaled, integrate_interval, integrate_quadrant,
    integrate_quadrant_scaled, QuadratureSpec,
};
