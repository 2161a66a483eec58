use crate::channel::{er1, er3, f1_moments, f2_moments, l_irs_to_ue, SignalMoments};
use crate::error::{Error, Result};
use crate::netmodel::LinearScenario;

/// Gamma law with shape τ and scale θ (watts).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    pub shape: f64,
    pub scale: f64,
}

impl GammaParams {
    /// Match the first two moments: τ = mean²/var, θ = var/mean.
    pub fn from_moments(mean: f64, variance: f64) -> Result<Self> {
        if !(mean > 0.0) || !(variance > 0.0) || !mean.is_finite() || !variance.is_finite() {
            return Err(Error::numeric(
                "Gamma moment matching",
                format!("needs positive mean and variance, got mean {mean:e}, variance {variance:e}"),
            ));
        }
        Ok(GammaParams {
            shape: mean * mean / variance,
            scale: variance / mean,
        })
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }
}

/// Moments of the conditional desired power `S_k | (z, d0)`.
///
/// With `d0 = None` (no IRS in the local region) the power is exponential
/// with mean `P_k l_d`.
pub fn signal_moments(s: &LinearScenario, k: usize, z: f64, d0: Option<f64>) -> Result<SignalMoments> {
    let tier = &s.tiers[k];
    if !(z >= tier.height_m) || z <= 0.0 {
        return Err(Error::Precondition(format!(
            "serving distance {z} m below tier {k} height {} m",
            tier.height_m
        )));
    }
    let l_d = s.beta * z.powf(-tier.alpha);
    let p = tier.power_w;
    let Some(d0) = d0 else {
        let mean = p * l_d;
        return Ok(SignalMoments {
            mean,
            second_moment: 2.0 * mean * mean,
        });
    };
    let irs = &s.irs;
    let l_r0 = l_irs_to_ue(d0, irs.height_m, irs.pathloss_exponent, s.beta);
    let (m2_1, m4_1) = f1_moments(l_d, l_r0, irs.elements);
    let (m2_2, m4_2) = f2_moments(l_d, irs.elements, er1(d0, irs, s.beta)?, er3(d0, irs, s.beta)?);
    Ok(SignalMoments {
        mean: p * (m2_1 + m2_2),
        second_moment: p * p * (m4_1 + m4_2 + 4.0 * m2_1 * m2_2),
    })
}

/// Moment-matched Gamma law of the conditional desired power.
pub fn signal_gamma(s: &LinearScenario, k: usize, z: f64, d0: Option<f64>) -> Result<GammaParams> {
    if d0.is_none() {
        let tier = &s.tiers[k];
        signal_moments(s, k, z, None)?;
        return Ok(GammaParams {
            shape: 1.0,
            scale: tier.power_w * s.beta * z.powf(-tier.alpha),
        });
    }
    let m = signal_moments(s, k, z, d0)?;
    let var = m.variance();
    if !(var > 0.0) {
        return Err(Error::numeric(
            format!("signal moments at k={k}, z={z}, d0={d0:?}"),
            format!("non-positive variance {var:e} (mean {:e})", m.mean),
        ));
    }
    GammaParams::from_moments(m.mean, var)
}
