//! Gauss hypergeometric function on the non-positive real axis.
//!
//! Every argument is first mapped into `[0, 4/5]` where the power series
//! converges geometrically:
//!
//! * `-4 <= x < 0`: Pfaff, `x -> x/(x-1)`.
//! * `x < -4`: the `1/x` connection formula, each of its two series in turn
//!   Pfaff-transformed. Requires `a - b` not an integer. Near `x = -1` the
//!   two connection terms cancel badly for large parameters, hence the
//!   wide Pfaff range.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

const SERIES_EPS: f64 = 1e-17;
const PFAFF_LIMIT: f64 = -4.0;
const MAX_TERMS: usize = 20_000;
// used only when a - b is an integer and |x| > 1 (no connection formula)
const MAX_TERMS_SLOW: usize = 5_000_000;

/// ₂F₁(a, b; c; x) for `x <= 0`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let ctx = || format!("2F1(a={a}, b={b}, c={c}, x={x})");
    if !(x <= 0.0) || ![a, b, c].iter().all(|v| v.is_finite()) {
        return Err(Error::Precondition(format!(
            "{}: requires finite parameters and x <= 0",
            ctx()
        )));
    }
    if c <= 0.0 && c == c.floor() {
        return Err(Error::Precondition(format!(
            "{}: c must not be a non-positive integer",
            ctx()
        )));
    }
    if x == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if x >= PFAFF_LIMIT {
        return pfaff(a, b, c, x, MAX_TERMS).map_err(|d| Error::numeric(ctx(), d));
    }
    let diff = a - b;
    if (diff - diff.round()).abs() < 1e-9 {
        return pfaff(a, b, c, x, MAX_TERMS_SLOW).map_err(|d| Error::numeric(ctx(), d));
    }
    connection(a, b, c, x).map_err(|d| Error::numeric(ctx(), d))
}

/// Pfaff transformation to `t = x/(x-1)`, keeping whichever of `a`, `b`
/// gives the milder series.
fn pfaff(a: f64, b: f64, c: f64, x: f64, max_terms: usize) -> std::result::Result<f64, String> {
    let t = x / (x - 1.0);
    let keep_a = (a * (c - b)).abs() <= ((c - a) * b).abs();
    if keep_a {
        Ok((1.0 - x).powf(-a) * series(a, c - b, c, t, max_terms)?)
    } else {
        Ok((1.0 - x).powf(-b) * series(c - a, b, c, t, max_terms)?)
    }
}

fn connection(a: f64, b: f64, c: f64, x: f64) -> std::result::Result<f64, String> {
    let w = 1.0 / x;
    let mx = -x;
    let lg_c = ln_abs_gamma(c);
    let term = |p: f64, q: f64| -> std::result::Result<f64, String> {
        // Γ(c)Γ(q-p)/(Γ(q)Γ(c-p)) (-x)^{-p} ₂F₁(p, p-c+1; p-q+1; 1/x)
        let (rq, sq) = recip_gamma_parts(q);
        let (rcp, scp) = recip_gamma_parts(c - p);
        if sq == 0.0 || scp == 0.0 {
            return Ok(0.0);
        }
        let sign = gamma_sign(c) * gamma_sign(q - p) * sq * scp;
        let log_mag = lg_c + ln_abs_gamma(q - p) + rq + rcp - p * mx.ln();
        let inner = pfaff(p, p - c + 1.0, p - q + 1.0, w, MAX_TERMS)?;
        Ok(sign * log_mag.exp() * inner)
    };
    Ok(term(a, b)? + term(b, a)?)
}

/// Power series Σ (a)_k (b)_k / ((c)_k k!) t^k for `0 <= t < 1`.
fn series(a: f64, b: f64, c: f64, t: f64, max_terms: usize) -> std::result::Result<f64, String> {
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut small_run = 0;
    for k in 0..max_terms {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * t;
        term *= ratio;
        if term == 0.0 {
            return Ok(sum);
        }
        sum += term;
        if term.abs() <= SERIES_EPS * sum.abs() && ratio.abs() < 1.0 {
            small_run += 1;
            if small_run >= 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
        if !sum.is_finite() {
            return Err(format!("series overflow at term {k}"));
        }
    }
    Err(format!("series did not converge in {max_terms} terms (t = {t})"))
}

fn ln_abs_gamma(x: f64) -> f64 {
    if x >= 0.5 {
        ln_gamma(x)
    } else {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x)
    }
}

fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if (x.ceil() - x) == 0.0 {
        f64::NAN
    } else if (-x).ceil() as i64 % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `(-ln|Γ(x)|, sign(Γ(x)))`, with sign 0 at the poles where 1/Γ vanishes.
fn recip_gamma_parts(x: f64) -> (f64, f64) {
    if x <= 0.0 && x == x.floor() {
        (0.0, 0.0)
    } else {
        (-ln_abs_gamma(x), gamma_sign(x))
    }
}
