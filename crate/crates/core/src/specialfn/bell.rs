//! Higher derivatives of `exp(V(s))` through complete Bell polynomials.
//!
//! `dⁿ/dsⁿ e^{V} = e^{V} · Bₙ(V′, V″, …, V⁽ⁿ⁾)`, where
//! `Bₙ(x₁…xₙ) = Σ n! / Π(mᵢ! (i!)^{mᵢ}) · Π xᵢ^{mᵢ}` over the integer
//! partitions of n (`Σ i·mᵢ = n`). The partition table with its exact
//! integer coefficients is built once, up to [`MAX_ORDER`].

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 20;

struct Monomial {
    coef: f64,
    /// (derivative order i, multiplicity mᵢ), mᵢ > 0
    factors: Vec<(usize, u32)>,
}

fn table() -> &'static [Vec<Monomial>] {
    static TABLE: OnceLock<Vec<Vec<Monomial>>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=MAX_ORDER).map(monomials).collect())
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn monomials(n: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut mult = vec![0u32; n + 1];
    partitions(n, n, &mut mult, &mut out);
    out
}

// Enumerate partitions of `rest` using parts <= `max_part`.
fn partitions(rest: usize, max_part: usize, mult: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if rest == 0 {
        let n: usize = mult.iter().enumerate().map(|(i, &m)| i * m as usize).sum();
        let mut denom: u128 = 1;
        let mut factors = Vec::new();
        for (i, &m) in mult.iter().enumerate().skip(1) {
            if m > 0 {
                denom *= factorial(m as usize) * factorial(i).pow(m);
                factors.push((i, m));
            }
        }
        let coef = factorial(n) / denom;
        debug_assert_eq!(coef * denom, factorial(n));
        out.push(Monomial {
            coef: coef as f64,
            factors,
        });
        return;
    }
    for part in (1..=max_part.min(rest)).rev() {
        mult[part] += 1;
        partitions(rest - part, part, mult, out);
        mult[part] -= 1;
    }
}

/// Complete Bell polynomial `Bₙ(x₁, …, xₙ)`; `x[i-1]` holds `xᵢ`.
pub fn complete_bell(x: &[f64], n: usize) -> Result<f64> {
    Ok(complete_bell_all(x, n)?[n])
}

/// `[B₀, B₁, …, Bₙ]` sharing one power table.
pub fn complete_bell_all(x: &[f64], n: usize) -> Result<Vec<f64>> {
    if n > MAX_ORDER {
        return Err(order_overflow(n));
    }
    if x.len() < n {
        return Err(Error::Precondition(format!(
            "Bell polynomial of order {n} needs {n} derivatives, got {}",
            x.len()
        )));
    }
    // powers[i][m] = x_i^m
    let powers: Vec<Vec<f64>> = (0..=n)
        .map(|i| {
            let base = if i == 0 { 1.0 } else { x[i - 1] };
            let mut p = Vec::with_capacity(n / i.max(1) + 1);
            let mut acc = 1.0;
            for _ in 0..=n / i.max(1) {
                p.push(acc);
                acc *= base;
            }
            p
        })
        .collect();
    let table = table();
    Ok((0..=n)
        .map(|order| {
            table[order]
                .iter()
                .map(|mono| {
                    mono.factors
                        .iter()
                        .fold(mono.coef, |acc, &(i, m)| acc * powers[i][m as usize])
                })
                .sum()
        })
        .collect())
}

/// `dⁱ/dsⁱ exp(V(s))` for `i = 0..=n`, given `v0 = V(s)` and
/// `v_derivs = [V′(s), …, V⁽ⁿ⁾(s)]`.
pub fn composition_derivatives(v_derivs: &[f64], n: usize, v0: f64) -> Result<Vec<f64>> {
    let e = v0.exp();
    Ok(complete_bell_all(v_derivs, n)?.into_iter().map(|b| e * b).collect())
}

fn order_overflow(n: usize) -> Error {
    Error::Precondition(format!(
        "derivative order {n} exceeds the supported maximum {MAX_ORDER}; use the interference-CDF branch instead"
    ))
}
