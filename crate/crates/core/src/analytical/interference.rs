//! Interference Laplace transform.
//!
//! For tier j with active density λ'_j and exclusion distance `e_j`
//! (no tier-j interferer closer than `e_j` in 3D),
//!
//! `U_j(x) = ∫_{e_j}^∞ (1 − 1/(1 + x β z^{−α_j})) z dz`
//!
//! and `L_I(s) = exp(−2π Σ_j λ'_j U_j(s ρ̄ P_j))`. Writing `u = β e_j^{−α} x`
//! and `δ = 2/α`:
//!
//! * `U = π/(α sin(2π/α)) (βx)^δ − e²/2 · ₂F₁(1, δ; 1+δ; −1/u)` (used for u ≥ 1),
//! * `U = e²/(α−2) · u · ₂F₁(1, 1−δ; 2−δ; −u)` (same function, no
//!   cancellation for small u),
//! * `U⁽ⁿ⁾(x) = (−1)^{n+1} n! (e²/α) (β e^{−α})ⁿ/(n−δ) · ₂F₁(n+1, n−δ; n+1−δ; −u)`, n ≥ 1.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::association::exclusion_distance;
use crate::channel::{er1, l_irs_to_ue};
use crate::error::{Error, Result};
use crate::netmodel::LinearScenario;
use crate::quad::{integrate, Tolerance};
use crate::specialfn::{gauss_2f1, inverse_laplace_cdf};

/// `U(x)` for real `x >= 0`.
pub fn u_function(x: f64, alpha: f64, z_j: f64, beta: f64) -> Result<f64> {
    if !(z_j > 0.0) || !(x >= 0.0) {
        return Err(Error::Precondition(format!(
            "U(x={x}, z_j={z_j}): requires x >= 0 and z_j > 0"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let delta = 2.0 / alpha;
    let u = beta * z_j.powf(-alpha) * x;
    if u >= 1.0 {
        let lead = PI / (alpha * (2.0 * PI / alpha).sin()) * (beta * x).powf(delta);
        Ok(lead - 0.5 * z_j * z_j * gauss_2f1(1.0, delta, 1.0 + delta, -1.0 / u)?)
    } else {
        Ok(z_j * z_j / (alpha - 2.0) * u * gauss_2f1(1.0, 1.0 - delta, 2.0 - delta, -u)?)
    }
}

/// n-th derivative of `U` at `x >= 0`, n ≥ 1.
pub fn u_derivative(n: usize, x: f64, alpha: f64, z_j: f64, beta: f64) -> Result<f64> {
    if n == 0 {
        return u_function(x, alpha, z_j, beta);
    }
    let delta = 2.0 / alpha;
    let b = beta * z_j.powf(-alpha);
    let nf = n as f64;
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let fact: f64 = (1..=n).map(|i| i as f64).product();
    let f = gauss_2f1(nf + 1.0, nf - delta, nf + 1.0 - delta, -b * x)?;
    Ok(sign * fact * z_j * z_j / alpha * b.powi(n as i32) / (nf - delta) * f)
}

/// `U(x)` for complex `x` with `Re x >= 0`.
pub fn u_function_complex(x: Complex64, alpha: f64, z_j: f64, beta: f64) -> Result<Complex64> {
    let u = x * (beta * z_j.powf(-alpha));
    Ok(u * (z_j * z_j / (alpha - 2.0)) * unit_integral(u, alpha / (alpha - 2.0))?)
}

/// `∫₀¹ dw / (1 + u w^p)`, p > 1.
fn unit_integral(u: Complex64, p: f64) -> Result<Complex64> {
    let r = u.norm();
    if r == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if r <= 0.5 {
        // Σ (−u)^m / (1 + p m)
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        for m in 0..200 {
            let term = pow / (1.0 + p * m as f64);
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                return Ok(sum);
            }
            pow *= -u;
        }
        return Ok(sum);
    }
    if r >= 2.0 {
        // ∫₀^∞ − ∫₁^∞, the latter as a series in 1/u
        let whole = u.powf(-1.0 / p) * (PI / p / (PI / p).sin());
        let inv = -1.0 / u;
        let mut tail = Complex64::new(0.0, 0.0);
        let mut pow = 1.0 / u;
        for m in 0..200 {
            let term = pow / (p * (m as f64 + 1.0) - 1.0);
            tail += term;
            if term.norm() < 1e-17 * tail.norm() {
                break;
            }
            pow *= inv;
        }
        return Ok(whole - tail);
    }
    let tol = Tolerance::rel(1e-12);
    let v: Complex64 = integrate(|w| 1.0 / (1.0 + u * w.powf(p)), 0.0, 1.0, tol)?;
    Ok(v)
}

/// Mean-field scattering factor `ρ̄ = K_sc(d0) = 1 + N l_r(d0) + N E_r1(d0)`;
/// one when the local region is empty.
pub fn k_sc(s: &LinearScenario, d0: Option<f64>) -> Result<f64> {
    let Some(d0) = d0 else {
        return Ok(1.0);
    };
    let irs = &s.irs;
    let n = irs.elements as f64;
    let l_r0 = l_irs_to_ue(d0, irs.height_m, irs.pathloss_exponent, s.beta);
    Ok(1.0 + n * l_r0 + n * er1(d0, irs, s.beta)?)
}

#[derive(Debug, Clone, Copy)]
struct InterfererTier {
    active_density: f64,
    power: f64,
    alpha: f64,
    exclusion: f64,
}

/// Interference seen by a user served by tier k at distance z, with the
/// scattering factor ρ̄ already folded into the per-tier powers.
#[derive(Debug, Clone)]
pub struct InterferenceField {
    tiers: Vec<InterfererTier>,
    beta: f64,
}

impl InterferenceField {
    pub fn new(s: &LinearScenario, k: usize, z: f64, rho: f64) -> Self {
        let tiers = s
            .tiers
            .iter()
            .enumerate()
            .map(|(j, t)| InterfererTier {
                active_density: t.active_density,
                power: rho * t.power_w,
                alpha: t.alpha,
                exclusion: exclusion_distance(s, k, j, z).max(t.height_m),
            })
            .collect();
        InterferenceField { tiers, beta: s.beta }
    }

    /// `ln L_I(s)` for real `s >= 0`.
    pub fn log_laplace(&self, s: f64) -> Result<f64> {
        let mut acc = 0.0;
        for t in &self.tiers {
            if t.active_density > 0.0 {
                acc += t.active_density * u_function(s * t.power, t.alpha, t.exclusion, self.beta)?;
            }
        }
        Ok(-2.0 * PI * acc)
    }

    pub fn laplace(&self, s: f64) -> Result<f64> {
        Ok(self.log_laplace(s)?.exp())
    }

    pub fn laplace_complex(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.tiers {
            if t.active_density > 0.0 {
                acc += u_function_complex(s * t.power, t.alpha, t.exclusion, self.beta)? * t.active_density;
            }
        }
        Ok((acc * (-2.0 * PI)).exp())
    }

    /// `[d^i/ds^i ln L_I(c·s)]` at `s = 1` for `i = 0..=n`; the interference
    /// part of `V(s)` with `c = γ₀/θ`.
    pub fn scaled_log_derivatives(&self, c: f64, n: usize) -> Result<Vec<f64>> {
        let mut out = vec![0.0; n + 1];
        for t in &self.tiers {
            if t.active_density <= 0.0 {
                continue;
            }
            let cj = c * t.power;
            let mut scale = 1.0;
            for (i, slot) in out.iter_mut().enumerate() {
                let d = u_derivative(i, cj, t.alpha, t.exclusion, self.beta)?;
                *slot -= 2.0 * PI * t.active_density * scale * d;
                scale *= cj;
            }
        }
        Ok(out)
    }

    /// `P[I <= y]` by numerical inversion.
    pub fn cdf(&self, y: f64, inverter: &crate::specialfn::LaplaceInverter) -> Result<f64> {
        inverse_laplace_cdf(|s| self.laplace_complex(s), y, inverter)
    }
}

/// `E[e^{−sI}]` conditioned on (k, z_k, d0), with the mean-field ρ̄.
pub fn laplace_interference(s: &LinearScenario, k: usize, s_val: f64, z_k: f64, d0: Option<f64>) -> Result<f64> {
    if !(s_val >= 0.0) {
        return Err(Error::Precondition(format!(
            "Laplace argument s = {s_val} must be >= 0"
        )));
    }
    InterferenceField::new(s, k, z_k, k_sc(s, d0)?).laplace(s_val)
}
