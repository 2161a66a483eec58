use std::f64::consts::PI;

use crate::error::Result;
use crate::netmodel::{IrsConfig, LinearScenario};
use crate::quad::{find_crossing, try_integrate_pieces, Tolerance};

/// 3D distance inside which no tier-j BS may lie for tier k at distance `z`
/// to win the biased association, `(P̂_j B̂_j)^{1/α_j} z^{α_k/α_j}`.
pub(crate) fn exclusion_distance(s: &LinearScenario, k: usize, j: usize, z: f64) -> f64 {
    let (tk, tj) = (&s.tiers[k], &s.tiers[j]);
    let pb = (tj.power_w * tj.bias) / (tk.power_w * tk.bias);
    pb.powf(1.0 / tj.alpha) * z.powf(tk.alpha / tj.alpha)
}

/// `π Σ_j λ_j [z_j² − H_j²]⁺`: minus the log-probability that no BS of any
/// tier beats a tier-k BS at 3D distance `z`.
pub fn void_exponent(s: &LinearScenario, k: usize, z: f64) -> f64 {
    PI * s
        .tiers
        .iter()
        .enumerate()
        .map(|(j, t)| {
            let zj = exclusion_distance(s, k, j, z);
            t.density * (zj * zj - t.height_m * t.height_m).max(0.0)
        })
        .sum::<f64>()
}

/// Radial integration layout for one serving tier: association probability,
/// truncation point, and the kinks of the void exponent.
#[derive(Debug, Clone)]
pub struct TierGeometry {
    pub tier: usize,
    pub association: f64,
    /// Integration nodes `H_k = p₀ < … < p_m = cutoff`.
    pub breakpoints: Vec<f64>,
    density: f64,
}

impl TierGeometry {
    pub fn new(s: &LinearScenario, k: usize) -> Result<Self> {
        let h_k = s.tiers[k].height_m;
        let cutoff = find_crossing(
            |z| void_exponent(s, k, z),
            h_k.max(1e-9),
            s.numerics.tail_cutoff_exponent,
        );
        let mut breakpoints = vec![h_k, cutoff];
        for (j, t) in s.tiers.iter().enumerate() {
            if j == k || t.height_m <= 0.0 {
                continue;
            }
            // z where the tier-j exclusion distance reaches H_j
            let tk = &s.tiers[k];
            let pb = (t.power_w * t.bias) / (tk.power_w * tk.bias);
            let kink = (t.height_m / pb.powf(1.0 / t.alpha)).powf(t.alpha / tk.alpha);
            if kink > h_k && kink < cutoff {
                breakpoints.push(kink);
            }
        }
        breakpoints.sort_by(f64::total_cmp);
        let density = s.tiers[k].density;
        let tol = Tolerance::rel(s.numerics.quad_rel_tol * 0.1).with_abs(1e-14);
        let association = try_integrate_pieces(
            |z| Ok(2.0 * PI * density * z * (-void_exponent(s, k, z)).exp()),
            &breakpoints,
            tol,
        )?;
        Ok(TierGeometry {
            tier: k,
            association: association.clamp(0.0, 1.0),
            breakpoints,
            density,
        })
    }

    pub fn cutoff(&self) -> f64 {
        *self.breakpoints.last().expect("at least two breakpoints")
    }

    /// `A_k f_{X_k}(z)`, the unnormalized joint density of associating with
    /// tier k at distance z.
    pub fn joint_density(&self, s: &LinearScenario, z: f64) -> f64 {
        if z < self.breakpoints[0] {
            return 0.0;
        }
        2.0 * PI * self.density * z * (-void_exponent(s, self.tier, z)).exp()
    }

    /// Serving-distance density conditioned on tier k.
    pub fn pdf(&self, s: &LinearScenario, z: f64) -> f64 {
        if self.association <= 0.0 {
            return 0.0;
        }
        self.joint_density(s, z) / self.association
    }
}

/// Probability that the typical user associates with tier `k`.
pub fn association_probability(s: &LinearScenario, k: usize) -> Result<f64> {
    Ok(TierGeometry::new(s, k)?.association)
}

/// Density of the 3D serving distance given association with tier `k`.
/// Zero below the tier height.
pub fn serving_distance_pdf(s: &LinearScenario, k: usize, x: f64) -> Result<f64> {
    Ok(TierGeometry::new(s, k)?.pdf(s, x))
}

/// Nearest-IRS distance density `2πλ_I d exp(−πλ_I d²)`. On `[0, D_max]` its
/// mass plus the empty-region probability is one.
pub fn irs_distance_pdf(irs: &IrsConfig, d: f64) -> f64 {
    if d < 0.0 {
        return 0.0;
    }
    let lam = irs.density_per_m2;
    2.0 * PI * lam * d * (-PI * lam * d * d).exp()
}
