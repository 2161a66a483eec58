//! Special-function kernels used by the closed-form engine.

pub mod bell;
mod gamma;
mod hyp2f1;
mod laplace;

pub use bell::{complete_bell, complete_bell_all, composition_derivatives};
pub use gamma::{lower_gamma_reg, upper_gamma_reg};
pub use hyp2f1::gauss_2f1;
pub use laplace::{inverse_laplace_cdf, InversionMethod, LaplaceInverter};
