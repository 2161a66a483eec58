//! Path-loss kernels and the channel-power statistics built on them.
//!
//! Gains are average channel power gains (dimensionless, β-scaled):
//!
//! * direct BS→UE: `l_d = β X^{-α_j}`, X the 3D distance;
//! * BS→IRS: `l_i = β (r² + H_j² − H_I²)^{-α_j/2}`, r the 2D BS–IRS distance;
//! * IRS→UE: `l_r = β (d² + H_I²)^{-α_I/2}`, d the 2D IRS–UE distance.
//!
//! The moment expressions for the composite serving signal take `l_i ≈ l_d`
//! for the serving BS, which is what lets them depend on `l_d` alone.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::netmodel::{IrsConfig, LinearScenario};

#[derive(Debug, Clone, PartialEq)]
pub struct PathKernels {
    pub beta: f64,
    pub tier_alpha: Vec<f64>,
    pub tier_height: Vec<f64>,
    pub irs_alpha: f64,
    pub irs_height: f64,
}

impl PathKernels {
    pub fn new(scenario: &LinearScenario) -> Self {
        PathKernels {
            beta: scenario.beta,
            tier_alpha: scenario.tiers.iter().map(|t| t.alpha).collect(),
            tier_height: scenario.tiers.iter().map(|t| t.height_m).collect(),
            irs_alpha: scenario.irs.pathloss_exponent,
            irs_height: scenario.irs.height_m,
        }
    }

    /// `β X^{-α_j}` for a 3D distance `X >= H_j`.
    pub fn l_direct(&self, tier: usize, dist3d_m: f64) -> Result<f64> {
        let h = self.tier_height[tier];
        if !(dist3d_m >= h * (1.0 - 1e-12)) || dist3d_m <= 0.0 {
            return Err(Error::Precondition(format!(
                "l_direct: 3D distance {dist3d_m} m is below tier {tier} height {h} m"
            )));
        }
        Ok(self.beta * dist3d_m.powf(-self.tier_alpha[tier]))
    }

    /// `β (d² + H_I²)^{-α_I/2}`.
    pub fn l_irs_to_ue(&self, dist2d_m: f64) -> f64 {
        l_irs_to_ue(dist2d_m, self.irs_height, self.irs_alpha, self.beta)
    }

    /// `β (r² + H_j² − H_I²)^{-α_j/2}`; the bracket must stay positive.
    pub fn l_bs_to_irs(&self, tier: usize, dist2d_m: f64) -> Result<f64> {
        let h = self.tier_height[tier];
        let q = dist2d_m * dist2d_m + h * h - self.irs_height * self.irs_height;
        if !(q > 0.0) {
            return Err(Error::Precondition(format!(
                "l_bs_to_irs: r² + H_j² − H_I² = {q} <= 0 (tier {tier}, r = {dist2d_m} m); IRS above BS too close"
            )));
        }
        Ok(self.beta * q.powf(-0.5 * self.tier_alpha[tier]))
    }
}

pub fn l_irs_to_ue(dist2d_m: f64, irs_height: f64, irs_alpha: f64, beta: f64) -> f64 {
    beta * (dist2d_m * dist2d_m + irs_height * irs_height).powf(-0.5 * irs_alpha)
}

/// Second moment of the coherently combined N-element cascade, per unit
/// `l_i l_r`: `π²N²/16 + (1 − π²/16) N`.
pub fn beamforming_gain(n_elements: u32) -> f64 {
    let n = n_elements as f64;
    PI * PI * n * n / 16.0 + (1.0 - PI * PI / 16.0) * n
}

/// Second moment of a randomly phased N-element cascade, per unit `l_i l_r`.
pub fn scattering_gain(n_elements: u32) -> f64 {
    n_elements as f64
}

fn check_d0(d0_m: f64, irs: &IrsConfig) -> Result<()> {
    if !(0.0..=irs.local_radius_m).contains(&d0_m) {
        return Err(Error::Precondition(format!(
            "d0 = {d0_m} m must lie in [0, D_max = {} m]",
            irs.local_radius_m
        )));
    }
    Ok(())
}

/// Mean of `Σ l_r` over the IRSs in the annulus `d0 < d <= D_max`
/// (Campbell's theorem).
pub fn er1(d0_m: f64, irs: &IrsConfig, beta: f64) -> Result<f64> {
    check_d0(d0_m, irs)?;
    let a = irs.pathloss_exponent;
    let h2 = irs.height_m * irs.height_m;
    let e = (2.0 - a) / 2.0;
    let bracket = (d0_m * d0_m + h2).powf(e) - (irs.local_radius_m.powi(2) + h2).powf(e);
    Ok((2.0 * PI * irs.density_per_m2 * beta / (a - 2.0) * bracket).max(0.0))
}

/// Variance of `Σ l_r` over the same annulus.
pub fn er2(d0_m: f64, irs: &IrsConfig, beta: f64) -> Result<f64> {
    check_d0(d0_m, irs)?;
    let a = irs.pathloss_exponent;
    let h2 = irs.height_m * irs.height_m;
    let e = 1.0 - a;
    let bracket = (d0_m * d0_m + h2).powf(e) - (irs.local_radius_m.powi(2) + h2).powf(e);
    Ok((PI * irs.density_per_m2 * beta * beta / (a - 1.0) * bracket).max(0.0))
}

/// Second moment of `Σ l_r`: `er1² + er2`.
pub fn er3(d0_m: f64, irs: &IrsConfig, beta: f64) -> Result<f64> {
    let m = er1(d0_m, irs, beta)?;
    Ok(m * m + er2(d0_m, irs, beta)?)
}

/// `(E|f₁|², E|f₁|⁴)` for the direct path plus the phase-aligned serving
/// IRS, written in `l_d` and `l_r0`.
pub fn f1_moments(l_d: f64, l_r0: f64, n_elements: u32) -> (f64, f64) {
    let n = n_elements as f64;
    let g_bf = beamforming_gain(n_elements);
    let c = 1.0 - PI * PI / 16.0;
    let sqrt_pi = PI.sqrt();
    let x = l_r0.sqrt();
    let m2 = l_d * (1.0 + n * PI / 4.0 * (PI * l_r0).sqrt() + g_bf * l_r0);
    let cubic = 2.0 * sqrt_pi * (PI.powi(3) * n.powi(3) / 64.0 + (3.0 * PI + n * n * c) / 4.0);
    let quartic = PI.powi(4) * n.powi(4) / 256.0 + 3.0 * PI * PI * n.powi(3) * c / 8.0 + 3.0 * n * n * c * c;
    let m4 =
        l_d * l_d * (2.0 + 0.75 * PI.powf(1.5) * n * x + 6.0 * g_bf * l_r0 + cubic * l_r0 * x + quartic * l_r0 * l_r0);
    (m2, m4)
}

/// `(E|f₂|², E|f₂|⁴)` for the randomly scattered paths through the other
/// IRSs in the local region.
pub fn f2_moments(l_d: f64, n_elements: u32, er1_val: f64, er3_val: f64) -> (f64, f64) {
    let n = n_elements as f64;
    (n * l_d * er1_val, 2.0 * n * n * l_d * l_d * er3_val)
}

/// First two moments of a received power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalMoments {
    pub mean: f64,
    pub second_moment: f64,
}

impl SignalMoments {
    pub fn variance(&self) -> f64 {
        self.second_moment - self.mean * self.mean
    }
}
