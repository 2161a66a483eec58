//! Numerical inversion of Laplace transforms of nonnegative random variables.
//!
//! Both methods need the transform on complex arguments:
//!
//! * Euler summation (Abate–Whitt): trapezoidal Bromwich sum with binomial
//!   (Euler) averaging of the alternating tail, `2M + 1` terms.
//! * Fixed Talbot (Abate–Valkó): deformed contour, `M` terms. Needs the
//!   transform analytic to the left of the imaginary axis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InversionMethod {
    EulerSummation,
    TalbotContour,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LaplaceInverter {
    pub method: InversionMethod,
    pub terms: u32,
    /// Allowed disagreement between the full and reduced-order inversions,
    /// and the allowed excursion outside `[0, 1]` before clamping.
    pub precision_target: f64,
}

impl Default for LaplaceInverter {
    fn default() -> Self {
        LaplaceInverter {
            method: InversionMethod::EulerSummation,
            terms: 40,
            precision_target: 1e-6,
        }
    }
}

impl LaplaceInverter {
    pub fn check(&self) -> std::result::Result<(), String> {
        if self.terms < 10 {
            return Err("terms >= 10".into());
        }
        if self.terms > 120 {
            return Err("terms <= 120 (double precision roundoff grows with order)".into());
        }
        if !(self.precision_target > 0.0 && self.precision_target <= 1e-3) {
            return Err("precision_target in (0, 1e-3]".into());
        }
        Ok(())
    }

    /// Invert `f` at `t > 0` with the configured number of terms.
    pub fn invert<F>(&self, f: F, t: f64) -> Result<f64>
    where
        F: FnMut(Complex64) -> Result<Complex64>,
    {
        self.invert_with(f, t, self.terms)
    }

    fn invert_with<F>(&self, f: F, t: f64, terms: u32) -> Result<f64>
    where
        F: FnMut(Complex64) -> Result<Complex64>,
    {
        match self.method {
            InversionMethod::EulerSummation => euler(f, t, (terms / 2) as usize),
            InversionMethod::TalbotContour => talbot(f, t, terms as usize),
        }
    }

    fn reduced_terms(&self) -> u32 {
        match self.method {
            InversionMethod::EulerSummation => self.terms.saturating_sub(4).max(10),
            InversionMethod::TalbotContour => (self.terms * 3 / 4).max(10),
        }
    }
}

fn euler<F>(mut f: F, t: f64, m: usize) -> Result<f64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mf = m as f64;
    let a = mf * std::f64::consts::LN_10 / 3.0;
    // ξ weights: ½, then ones up to M, then the binomial tail down to 2^{-M}
    let mut xi = vec![1.0; 2 * m + 1];
    xi[0] = 0.5;
    let two_m = 0.5f64.powi(m as i32);
    xi[2 * m] = two_m;
    let mut binom = 1.0;
    for k in 1..m {
        binom *= (m - k + 1) as f64 / k as f64;
        xi[2 * m - k] = xi[2 * m - k + 1] + two_m * binom;
    }
    let mut acc = 0.0;
    for (k, &w) in xi.iter().enumerate() {
        let s = Complex64::new(a, std::f64::consts::PI * k as f64) / t;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * w * f(s)?.re;
    }
    Ok(10f64.powf(mf / 3.0) / t * acc)
}

fn talbot<F>(mut f: F, t: f64, m: usize) -> Result<f64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mf = m as f64;
    let r = 2.0 * mf / (5.0 * t);
    let mut acc = 0.5 * ((r * t).exp() * f(Complex64::new(r, 0.0))?).re;
    for k in 1..m {
        let theta = k as f64 * std::f64::consts::PI / mf;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        acc += ((s * t).exp() * f(s)? * Complex64::new(1.0, sigma)).re;
    }
    Ok(r / mf * acc)
}

/// CDF `P[X <= y]` of a nonnegative random variable from its Laplace
/// transform `E[e^{-sX}]`, by inverting `transform(s) / s`.
pub fn inverse_laplace_cdf<F>(mut transform: F, y: f64, inverter: &LaplaceInverter) -> Result<f64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    if let Err(msg) = inverter.check() {
        return Err(Error::Precondition(format!("laplace inverter: {msg}")));
    }
    let at_zero = transform(Complex64::new(0.0, 0.0))?;
    if (at_zero - 1.0).norm() > 1e-9 {
        return Err(Error::Precondition(format!(
            "transform(0) = {at_zero}, a probability Laplace transform must equal 1"
        )));
    }
    if !(y > 0.0) {
        return Ok(0.0);
    }
    let mut over_s = |s: Complex64| transform(s).map(|v| v / s);
    let full = inverter.invert_with(&mut over_s, y, inverter.terms)?;
    let reduced = inverter.invert_with(&mut over_s, y, inverter.reduced_terms())?;
    let residual = (full - reduced).abs();
    let eps = inverter.precision_target;
    if !full.is_finite() || residual > eps || full < -eps || full > 1.0 + eps {
        return Err(Error::numeric(
            format!(
                "inverse Laplace CDF at y = {y:e} ({:?}, {} terms)",
                inverter.method, inverter.terms
            ),
            format!(
                "value {full:e}, reduced-order value {reduced:e}, residual {residual:e} > {eps:e} or out of [0, 1]"
            ),
        ));
    }
    Ok(full.clamp(0.0, 1.0))
}
