use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::realization::NetworkRealization;
use super::sample::{simulate_sample, SinrSample};
use crate::analytical::{throughput_from, CoverageBreakdown};
use crate::error::{Error, Result};
use crate::netmodel::LinearScenario;

/// Redraws allowed when a drop contains no BS at all.
const MAX_REDRAWS: usize = 10_000;

/// Two-sided 95% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Monte Carlo estimates with 95% confidence intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct SimEstimate {
    pub trials: usize,
    pub breakdown: CoverageBreakdown,
    pub per_tier_coverage_ci: Vec<Interval>,
    pub per_tier_throughput_ci: Vec<Interval>,
    pub overall_ci: Interval,
    pub throughput_ci: Interval,
    /// Fraction of trials whose local region held no IRS.
    pub empty_delta_fraction: f64,
}

/// Wilson score interval for `successes` out of `n`.
pub fn wilson_interval(successes: usize, n: usize) -> Interval {
    if n == 0 {
        return Interval { lo: 0.0, hi: 1.0 };
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    Interval {
        lo: (center - half).max(0.0),
        hi: (center + half).min(1.0),
    }
}

/// RNG for trial `t` under master seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn one_trial(s: &LinearScenario, seed: u64, trial: u64) -> Result<SinrSample> {
    let mut rng = trial_rng(seed, trial);
    for _ in 0..MAX_REDRAWS {
        let r = NetworkRealization::sample(s, seed, trial, &mut rng);
        if r.bs_count() > 0 {
            return simulate_sample(&r, s, &mut rng);
        }
    }
    Err(Error::EmptyNetwork)
}

/// SINR samples of `trials` independent drops, in trial order.
pub fn draw_samples(s: &LinearScenario, trials: usize, seed: u64) -> Result<Vec<SinrSample>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| one_trial(s, seed, t))
        .collect()
}

/// Coverage and throughput at the scenario's SINR threshold from existing
/// samples. Samples do not depend on the threshold, so one batch serves a
/// whole threshold sweep.
pub fn estimate_from_samples(s: &LinearScenario, samples: &[SinrSample]) -> Result<SimEstimate> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let kt = s.tier_count();
    let mut served = vec![0usize; kt];
    let mut covered = vec![0usize; kt];
    let mut empty = 0usize;
    for x in samples {
        served[x.tier] += 1;
        if x.sinr > s.sinr_threshold {
            covered[x.tier] += 1;
        }
        if x.irs_distance_m.is_none() {
            empty += 1;
        }
    }
    let nf = n as f64;
    let association: Vec<f64> = served.iter().map(|&c| c as f64 / nf).collect();
    let coverage: Vec<f64> = covered
        .iter()
        .zip(&served)
        .map(|(&c, &m)| if m == 0 { 0.0 } else { c as f64 / m as f64 })
        .collect();
    let (per_tier_throughput, throughput) = throughput_from(s, &association, &coverage);
    let total_covered: usize = covered.iter().sum();

    // per-tier throughput is R₀ p_k λ_k times the joint fraction covered_k / n
    let weights: Vec<f64> = s
        .tiers
        .iter()
        .map(|t| s.rate_threshold * t.load_factor * t.density)
        .collect();
    let per_tier_throughput_ci = covered
        .iter()
        .zip(&weights)
        .map(|(&c, &w)| {
            let i = wilson_interval(c, n);
            Interval {
                lo: w * i.lo,
                hi: w * i.hi,
            }
        })
        .collect();
    // multinomial variance of Σ w_k covered_k / n
    let fractions: Vec<f64> = covered.iter().map(|&c| c as f64 / nf).collect();
    let m1: f64 = weights.iter().zip(&fractions).map(|(w, f)| w * f).sum();
    let m2: f64 = weights.iter().zip(&fractions).map(|(w, f)| w * w * f).sum();
    let sd = ((m2 - m1 * m1).max(0.0) / nf).sqrt();

    Ok(SimEstimate {
        trials: n,
        breakdown: CoverageBreakdown {
            per_tier_association: association,
            per_tier_coverage: coverage,
            per_tier_throughput,
            overall_coverage: total_covered as f64 / nf,
            throughput_bps_hz_per_m2: throughput,
            empty_delta_prob: s.irs.empty_region_prob(),
        },
        per_tier_coverage_ci: covered
            .iter()
            .zip(&served)
            .map(|(&c, &m)| wilson_interval(c, m))
            .collect(),
        per_tier_throughput_ci,
        overall_ci: wilson_interval(total_covered, n),
        throughput_ci: Interval {
            lo: (throughput - Z95 * sd).max(0.0),
            hi: throughput + Z95 * sd,
        },
        empty_delta_fraction: empty as f64 / nf,
    })
}

/// Run `trials` drops and estimate coverage and throughput.
pub fn estimate(s: &LinearScenario, trials: usize, seed: u64) -> Result<SimEstimate> {
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    estimate_from_samples(s, &draw_samples(s, trials, seed)?)
}
