use rand::Rng;

use super::ppp::sample_ppp;
use crate::error::{Error, Result};
use crate::netmodel::LinearScenario;

/// BS positions of one tier and their activity marks.
#[derive(Debug, Clone, PartialEq)]
pub struct TierPoints {
    pub positions: Vec<[f64; 2]>,
    pub active: Vec<bool>,
}

/// One Poisson drop around the user at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkRealization {
    pub tiers: Vec<TierPoints>,
    /// IRSs inside the local region, sorted by distance to the user.
    pub irs: Vec<[f64; 2]>,
    pub window_half_m: f64,
    pub guard_m: f64,
    pub seed: u64,
    pub stream: u64,
}

/// Winner of the biased association.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Association {
    pub tier: usize,
    pub index: usize,
    /// 3D distance to the serving BS.
    pub distance_m: f64,
}

impl NetworkRealization {
    /// Guard margin `max(5 · mean nearest-BS distance, D_max)`.
    pub fn guard_margin(s: &LinearScenario) -> f64 {
        let total: f64 = s.tiers.iter().map(|t| t.density).sum();
        let mean_nearest = if total > 0.0 { 0.5 / total.sqrt() } else { 0.0 };
        (5.0 * mean_nearest).max(s.irs.local_radius_m)
    }

    pub fn window_half_width(s: &LinearScenario) -> f64 {
        s.numerics.sim_window_half_m.max(Self::guard_margin(s))
    }

    /// Drop BSs on the window and IRSs on the local region. IRSs farther
    /// than `D_max` neither serve nor scatter, so only the square around the
    /// local region is populated.
    pub fn sample<R: Rng + ?Sized>(s: &LinearScenario, seed: u64, stream: u64, rng: &mut R) -> Self {
        let half = Self::window_half_width(s);
        let tiers = s
            .tiers
            .iter()
            .map(|t| {
                let positions = sample_ppp(t.density, half, rng);
                let active = positions.iter().map(|_| rng.random_bool(t.load_factor)).collect();
                TierPoints { positions, active }
            })
            .collect();
        let d_max = s.irs.local_radius_m;
        let mut irs: Vec<[f64; 2]> = sample_ppp(s.irs.density_per_m2, d_max, rng)
            .into_iter()
            .filter(|p| p[0].hypot(p[1]) <= d_max)
            .collect();
        irs.sort_by(|a, b| a[0].hypot(a[1]).total_cmp(&b[0].hypot(b[1])));
        NetworkRealization {
            tiers,
            irs,
            window_half_m: half,
            guard_m: Self::guard_margin(s),
            seed,
            stream,
        }
    }

    pub fn bs_count(&self) -> usize {
        self.tiers.iter().map(|t| t.positions.len()).sum()
    }
}

/// Maximum biased received power over the nearest BS of each tier; ties go
/// to the lowest tier index.
pub fn associate(r: &NetworkRealization, s: &LinearScenario) -> Result<Association> {
    let mut best: Option<(f64, Association)> = None;
    for (k, (pts, t)) in r.tiers.iter().zip(&s.tiers).enumerate() {
        let nearest = pts
            .positions
            .iter()
            .enumerate()
            .map(|(i, p)| (i, p[0] * p[0] + p[1] * p[1]))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let Some((index, r2)) = nearest else {
            continue;
        };
        let z = (r2 + t.height_m * t.height_m).sqrt();
        let metric = t.power_w * t.bias * z.powf(-t.alpha);
        if best.as_ref().is_none_or(|(m, _)| metric > *m) {
            best = Some((
                metric,
                Association {
                    tier: k,
                    index,
                    distance_m: z,
                },
            ));
        }
    }
    best.map(|(_, a)| a).ok_or(Error::EmptyNetwork)
}
