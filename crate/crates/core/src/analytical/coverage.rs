//! Conditional and unconditional coverage, and spatial throughput.
//!
//! Given `(k, z, d0)` the desired power is `S ~ Gamma(τ, θ)` and
//! `P[S > γ(I + σ²)]` is evaluated by one of three branches:
//!
//! * integer τ = n: `Σ_{i<n} (−1)ⁱ/i! · dⁱ/dsⁱ e^{V(s)} |_{s=1}` with
//!   `V(s) = −sγσ²/θ + ln L_I(sγ/θ)`, expanded through complete Bell
//!   polynomials of the derivatives of V;
//! * non-integer τ: a mix of the ⌊τ⌋ and ⌈τ⌉ results with weight
//!   `ω = M(⌈τ⌉−τ) / (M(⌈τ⌉−τ) + (τ−⌊τ⌋))` on the floor value;
//! * τ above the configured threshold: the signal is replaced by its mean and
//!   the result is the interference CDF at `E[S]/γ − σ²`.

use crate::error::{Error, Result};
use crate::netmodel::LinearScenario;
use crate::quad::{try_integrate_pieces, Tolerance};
use crate::specialfn::complete_bell_all;

use super::association::{irs_distance_pdf, TierGeometry};
use super::interference::{k_sc, InterferenceField};
use super::signal::{signal_gamma, GammaParams};

/// Which evaluation path produced a conditional coverage value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoverageBranch {
    Derivative {
        order: usize,
    },
    Interpolated {
        floor: usize,
        ceil: usize,
        floor_weight: f64,
    },
    InterferenceCdf,
}

/// Unconditional metrics of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageBreakdown {
    pub per_tier_association: Vec<f64>,
    /// Coverage conditioned on associating with each tier.
    pub per_tier_coverage: Vec<f64>,
    /// `A_k P_k R₀ p_k λ_k` for each tier, bit/s/Hz/m².
    pub per_tier_throughput: Vec<f64>,
    pub overall_coverage: f64,
    pub throughput_bps_hz_per_m2: f64,
    pub empty_delta_prob: f64,
}

fn check_threshold(s: &LinearScenario) -> Result<()> {
    if !(s.sinr_threshold > 0.0) {
        return Err(Error::Precondition(format!(
            "SINR threshold must be positive, got {}",
            s.sinr_threshold
        )));
    }
    Ok(())
}

/// Terms `(−1)ⁱ/i! · dⁱ/dsⁱ e^{V(s) − V(1)}` at s = 1 for `i < order`,
/// together with `V(1)`.
fn derivative_terms(
    s: &LinearScenario,
    field: &InterferenceField,
    gamma: &GammaParams,
    order: usize,
) -> Result<(f64, Vec<f64>)> {
    let c = s.sinr_threshold / gamma.scale;
    let mut v = field.scaled_log_derivatives(c, order.saturating_sub(1))?;
    v[0] -= c * s.noise_w;
    if v.len() > 1 {
        v[1] -= c * s.noise_w;
    }
    let bell = complete_bell_all(&v[1..], order.saturating_sub(1))?;
    let mut fact = 1.0;
    let terms = bell
        .iter()
        .enumerate()
        .map(|(i, b)| {
            if i > 0 {
                fact *= i as f64;
            }
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * b / fact
        })
        .collect();
    Ok((v[0], terms))
}

fn partial_sum(v1: f64, terms: &[f64], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let sum: f64 = terms[..n].iter().sum();
    if sum <= 0.0 {
        return 0.0;
    }
    (sum.ln() + v1).exp().clamp(0.0, 1.0)
}

struct Conditional<'a> {
    s: &'a LinearScenario,
    field: InterferenceField,
    gamma: GammaParams,
}

impl<'a> Conditional<'a> {
    fn new(s: &'a LinearScenario, k: usize, z: f64, d0: Option<f64>) -> Result<Self> {
        let gamma = signal_gamma(s, k, z, d0)?;
        let field = InterferenceField::new(s, k, z, k_sc(s, d0)?);
        Ok(Conditional { s, field, gamma })
    }

    fn derivative(&self, order: usize) -> Result<f64> {
        let (v1, terms) = derivative_terms(self.s, &self.field, &self.gamma, order)?;
        Ok(partial_sum(v1, &terms, order))
    }

    fn interpolated(&self, tau: f64) -> Result<(f64, CoverageBranch)> {
        let floor = tau.floor() as usize;
        let ceil = tau.ceil() as usize;
        let m = self.s.priority_factor;
        let w = m * (ceil as f64 - tau) / (m * (ceil as f64 - tau) + (tau - floor as f64));
        let (v1, terms) = derivative_terms(self.s, &self.field, &self.gamma, ceil)?;
        let value = w * partial_sum(v1, &terms, floor) + (1.0 - w) * partial_sum(v1, &terms, ceil);
        Ok((
            value,
            CoverageBranch::Interpolated {
                floor,
                ceil,
                floor_weight: w,
            },
        ))
    }

    fn cdf(&self) -> Result<f64> {
        let y = self.gamma.mean() / self.s.sinr_threshold - self.s.noise_w;
        if y <= 0.0 {
            return Ok(0.0);
        }
        self.field.cdf(y, &self.s.numerics.laplace)
    }

    fn evaluate(&self) -> Result<(f64, CoverageBranch)> {
        let tau = self.gamma.shape;
        if tau > self.s.numerics.tau_threshold {
            return Ok((self.cdf()?, CoverageBranch::InterferenceCdf));
        }
        let nearest = tau.round();
        if (tau - nearest).abs() <= 1e-9 * nearest.max(1.0) && nearest >= 1.0 {
            let order = nearest as usize;
            return Ok((self.derivative(order)?, CoverageBranch::Derivative { order }));
        }
        self.interpolated(tau)
    }
}

fn context(k: usize, z: f64, d0: Option<f64>) -> String {
    match d0 {
        Some(d) => format!("coverage at k={k}, z={z} m, d0={d} m"),
        None => format!("coverage at k={k}, z={z} m, no IRS in the local region"),
    }
}

/// `P[SINR > γ₀ | tier k, serving distance z, nearest IRS at d0]`, with the
/// branch that produced it.
pub fn conditional_coverage_detail(
    s: &LinearScenario,
    k: usize,
    z: f64,
    d0: Option<f64>,
) -> Result<(f64, CoverageBranch)> {
    check_threshold(s)?;
    Conditional::new(s, k, z, d0)
        .and_then(|c| c.evaluate())
        .map_err(|e| e.with_context(context(k, z, d0)))
}

/// `P[SINR > γ₀ | tier k, serving distance z, nearest IRS at d0]`.
pub fn conditional_coverage(s: &LinearScenario, k: usize, z: f64, d0: Option<f64>) -> Result<f64> {
    Ok(conditional_coverage_detail(s, k, z, d0)?.0)
}

/// The integer-shape expansion evaluated at a forced order, keeping the
/// matched scale.
pub fn coverage_derivative_branch(s: &LinearScenario, k: usize, z: f64, d0: Option<f64>, order: usize) -> Result<f64> {
    check_threshold(s)?;
    Conditional::new(s, k, z, d0)?.derivative(order)
}

/// The mean-signal approximation: `F_I(E[S]/γ₀ − σ²)`.
pub fn coverage_cdf_branch(s: &LinearScenario, k: usize, z: f64, d0: Option<f64>) -> Result<f64> {
    check_threshold(s)?;
    Conditional::new(s, k, z, d0)?.cdf()
}

/// Per-tier and total throughput `A_k P_k R₀ p_k λ_k`.
pub fn throughput_from(s: &LinearScenario, association: &[f64], coverage: &[f64]) -> (Vec<f64>, f64) {
    let per_tier: Vec<f64> = s
        .tiers
        .iter()
        .zip(association.iter().zip(coverage))
        .map(|(t, (a, c))| a * c * s.rate_threshold * t.load_factor * t.density)
        .collect();
    let total = per_tier.iter().sum();
    (per_tier, total)
}

/// Nearest-IRS distances in `(0, D_max)` where the matched shape crosses an
/// integer or the branch threshold. The conditional coverage has kinks (and a
/// jump at the threshold) there. The shape does not depend on the serving
/// distance, so one set of nodes serves every z.
fn shape_nodes(s: &LinearScenario, k: usize, z_ref: f64) -> Result<Vec<f64>> {
    let d_max = s.irs.local_radius_m;
    let thr = s.numerics.tau_threshold;
    let shape = |d: f64| signal_gamma(s, k, z_ref, Some(d)).map(|g| g.shape);
    // level index: which integer band τ falls in, saturating at the threshold
    let band = |tau: f64| -> i64 {
        if tau > thr {
            i64::MAX
        } else {
            tau.floor() as i64
        }
    };
    const GRID: usize = 512;
    let mut nodes = vec![0.0];
    let mut prev_d = 0.0;
    let mut prev_band = band(shape(0.0)?);
    for i in 1..=GRID {
        let d = d_max * (i as f64 / GRID as f64).powi(2);
        let b = band(shape(d)?);
        if b != prev_band {
            let (mut lo, mut hi) = (prev_d, d);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if band(shape(mid)?) == prev_band {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            nodes.push(0.5 * (lo + hi));
            prev_band = b;
        }
        prev_d = d;
    }
    nodes.push(d_max);
    nodes.dedup();
    Ok(nodes)
}

/// Coverage of tier k averaged over serving distance and nearest-IRS
/// distance, conditioned on associating with tier k.
fn tier_coverage(s: &LinearScenario, geo: &TierGeometry) -> Result<f64> {
    if geo.association <= 0.0 {
        return Ok(0.0);
    }
    let k = geo.tier;
    let irs = &s.irs;
    let p_empty = irs.empty_region_prob();
    let with_irs = irs.density_per_m2 > 0.0 && irs.local_radius_m > 0.0;
    let rel = s.numerics.quad_rel_tol;
    let d0_points = if with_irs {
        shape_nodes(s, k, geo.breakpoints[0].max(1.0))?
    } else {
        Vec::new()
    };
    let inner = |z: f64| -> Result<f64> {
        let mut v = p_empty * conditional_coverage(s, k, z, None)?;
        if with_irs {
            v += try_integrate_pieces(
                |d| Ok(irs_distance_pdf(irs, d) * conditional_coverage(s, k, z, Some(d))?),
                &d0_points,
                Tolerance::rel(rel).with_abs(1e-9),
            )?;
        }
        Ok(v)
    };
    let joint = try_integrate_pieces(
        |z| {
            let w = geo.joint_density(s, z);
            if w == 0.0 {
                return Ok(0.0);
            }
            Ok(w * inner(z)?)
        },
        &geo.breakpoints,
        Tolerance::rel(rel).with_abs(1e-9 * geo.association),
    )
    .map_err(|e| e.with_context(format!("coverage integral for tier {k}")))?;
    Ok((joint / geo.association).clamp(0.0, 1.0))
}

/// Association probabilities, per-tier and overall coverage, and throughput.
pub fn overall_coverage(s: &LinearScenario) -> Result<CoverageBreakdown> {
    check_threshold(s)?;
    let mut association = Vec::with_capacity(s.tier_count());
    let mut coverage = Vec::with_capacity(s.tier_count());
    for k in 0..s.tier_count() {
        let geo = TierGeometry::new(s, k)?;
        coverage.push(tier_coverage(s, &geo)?);
        association.push(geo.association);
    }
    let overall = association
        .iter()
        .zip(&coverage)
        .map(|(a, c)| a * c)
        .sum::<f64>()
        .clamp(0.0, 1.0);
    let (per_tier_throughput, throughput) = throughput_from(s, &association, &coverage);
    Ok(CoverageBreakdown {
        per_tier_association: association,
        per_tier_coverage: coverage,
        per_tier_throughput,
        overall_coverage: overall,
        throughput_bps_hz_per_m2: throughput,
        empty_delta_prob: s.irs.empty_region_prob(),
    })
}

/// Network spatial throughput in bit/s/Hz/m².
pub fn spatial_throughput(s: &LinearScenario) -> Result<f64> {
    Ok(overall_coverage(s)?.throughput_bps_hz_per_m2)
}
