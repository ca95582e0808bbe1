//! Special functions and adaptive quadrature.

mod expint;
mod gamma;
mod lambert;
pub mod quad;

pub use expint::{exp_integral_en, exp_integral_en_scaled, exp_integral_en_scaled_seq};
pub use gamma::{ln_gamma, reg_lower_gamma, reg_lower_gamma_inv, reg_upper_gamma};
pub use lambert::lambert_w0;
pub use quad::{integrate, try_integrate, Estimate, QuadratureSpec};
