use statrs::function::gamma::{checked_gamma_lr, checked_gamma_ur};

use crate::error::{Error, Result};

/// Regularized upper incomplete gamma Q(τ, x), the Gamma(τ, 1) CCDF.
pub fn upper_gamma_reg(tau: f64, x: f64) -> Result<f64> {
    if x == 0.0 && tau > 0.0 {
        return Ok(1.0);
    }
    checked_gamma_ur(tau, x).map_err(|e| Error::Precondition(format!("Q({tau}, {x}): {e}")))
}

/// Regularized lower incomplete gamma P(τ, x).
pub fn lower_gamma_reg(tau: f64, x: f64) -> Result<f64> {
    if x == 0.0 && tau > 0.0 {
        return Ok(0.0);
    }
    checked_gamma_lr(tau, x).map_err(|e| Error::Precondition(format!("P({tau}, {x}): {e}")))
}
