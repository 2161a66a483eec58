use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};

use super::realization::{associate, NetworkRealization};
use crate::channel::PathKernels;
use crate::error::{Error, Result};
use crate::netmodel::LinearScenario;

/// Outcome of one trial at the typical user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrSample {
    pub tier: usize,
    /// 3D distance to the serving BS.
    pub serving_distance_m: f64,
    /// 2D distance to the serving IRS; `None` when the local region is empty.
    pub irs_distance_m: Option<f64>,
    pub signal_w: f64,
    pub interference_w: f64,
    pub sinr: f64,
}

fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

/// Circularly symmetric complex Gaussian with the given variance.
fn cscg<R: Rng + ?Sized>(variance: f64, rng: &mut R) -> Complex64 {
    let sd = (0.5 * variance).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(sd * re, sd * im)
}

/// Realize fading on every path and compute the SINR.
///
/// Per local IRS q let `W_q = Σ_n |h_{q,n}|²` collect its element gains toward
/// the user. Any randomly phased cascade through q is then, given `W_q`,
/// complex Gaussian with variance `l_i l_r W_q`, so each interferer's
/// channel is exactly `CN(0, l_d + Σ_q l_i,q l_r,q W_q)` and its power is
/// exponential. The serving IRS draws its elements one by one because they
/// also enter the coherent serving amplitude.
pub fn simulate_sample<R: Rng + ?Sized>(r: &NetworkRealization, s: &LinearScenario, rng: &mut R) -> Result<SinrSample> {
    let assoc = associate(r, s)?;
    let kernels = PathKernels::new(s);
    let n_el = s.irs.elements as usize;
    let k = assoc.tier;
    let server = r.tiers[k].positions[assoc.index];

    let irs_dist: Vec<f64> = r.irs.iter().map(|p| p[0].hypot(p[1])).collect();
    let l_r: Vec<f64> = irs_dist.iter().map(|&d| kernels.l_irs_to_ue(d)).collect();

    // element gains of the serving IRS toward the user, and W_q for the rest
    let serving_elems: Vec<f64> = if r.irs.is_empty() {
        Vec::new()
    } else {
        (0..n_el).map(|_| exp1(rng)).collect()
    };
    let mut w = Vec::with_capacity(r.irs.len());
    if !r.irs.is_empty() {
        w.push(serving_elems.iter().sum::<f64>());
        if r.irs.len() > 1 {
            let gamma = Gamma::new(n_el as f64, 1.0).map_err(|e| Error::numeric("element gain sum", e.to_string()))?;
            for _ in 1..r.irs.len() {
                w.push(gamma.sample(rng));
            }
        }
    }

    let cascade = |tier: usize, bs: [f64; 2]| -> Result<Vec<f64>> {
        r.irs
            .iter()
            .map(|q| kernels.l_bs_to_irs(tier, (bs[0] - q[0]).hypot(bs[1] - q[1])))
            .collect()
    };

    // serving signal
    let l_d = kernels.l_direct(k, assoc.distance_m)?;
    let direct_amp = (l_d * exp1(rng)).sqrt();
    let mut amp = direct_amp;
    let mut scattered_var = 0.0;
    if !r.irs.is_empty() {
        let l_i = cascade(k, server)?;
        let a0 = (l_i[0] * l_r[0]).sqrt();
        for &h2 in &serving_elems {
            amp += a0 * (exp1(rng) * h2).sqrt();
        }
        for q in 1..r.irs.len() {
            scattered_var += l_i[q] * l_r[q] * w[q];
        }
    }
    let field = Complex64::new(amp, 0.0) + cscg(scattered_var, rng);
    let p_k = s.tiers[k].power_w;
    let signal = p_k * field.norm_sqr();

    // interference from every other active BS
    let mut interference = 0.0;
    for (j, pts) in r.tiers.iter().enumerate() {
        let t = &s.tiers[j];
        let h2 = t.height_m * t.height_m;
        for (i, (p, &on)) in pts.positions.iter().zip(&pts.active).enumerate() {
            if !on || (j == k && i == assoc.index) {
                continue;
            }
            let x2 = p[0] * p[0] + p[1] * p[1] + h2;
            let mut var = s.beta * neg_half_pow(x2, t.alpha);
            for (q, irs) in r.irs.iter().enumerate() {
                let l_i = kernels.l_bs_to_irs(j, (p[0] - irs[0]).hypot(p[1] - irs[1]))?;
                var += l_i * l_r[q] * w[q];
            }
            interference += t.power_w * var * exp1(rng);
        }
    }

    Ok(SinrSample {
        tier: k,
        serving_distance_m: assoc.distance_m,
        irs_distance_m: irs_dist.first().copied(),
        signal_w: signal,
        interference_w: interference,
        sinr: signal / (interference + s.noise_w),
    })
}

/// `x^{−α/2}`, with the common even-integer exponents done by multiplication.
fn neg_half_pow(x: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (x * x)
    } else if alpha == 2.0 {
        1.0 / x
    } else {
        x.powf(-0.5 * alpha)
    }
}
