//! TOML configuration file.
//!
//! ```toml
//! [[tiers]]
//! transmit_power_dbm = 53.0
//! height_m = 20.0
//! density_lambda0 = 10.0      # or density_per_m2 = 5e-5
//! pathloss_exponent = 4.0
//! bias = 1.0                  # optional, default 1
//! load_factor = 1.0           # optional, default 1
//!
//! [irs]
//! height_m = 1.0
//! elements = 1000
//! density_lambda0 = 200.0     # or density_per_m2
//! pathloss_exponent = 3.0
//! local_radius_m = 50.0
//!
//! [eval]
//! carrier_hz = 2e9
//! noise_dbm = -117.0
//! rate_threshold = 1.0        # or sinr_threshold (linear) / sinr_threshold_db
//! priority_factor = 0.6       # optional, default 0.6
//!
//! [numerics]                  # optional, every key has a default
//! quad_rel_tol = 1e-6
//! tail_cutoff_exponent = 30.0
//! tau_threshold = 20.0
//! sim_window_half_m = 2000.0
//! laplace = { method = "euler_summation", terms = 40, precision_target = 1e-6 }
//! ```
//!
//! Unknown keys are rejected. Absolute densities are canonical; the
//! `density_lambda0` form multiplies [`LAMBDA0`](super::LAMBDA0) and is
//! converted on load. Serializing a [`Scenario`] writes the canonical form.

use std::path::Path;

use serde::Deserialize;

use super::{EvalConfig, IrsConfig, Numerics, Scenario, TierConfig, LAMBDA0};
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    tiers: Vec<RawTier>,
    irs: RawIrs,
    eval: RawEval,
    #[serde(default)]
    numerics: Numerics,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTier {
    transmit_power_dbm: f64,
    height_m: f64,
    density_per_m2: Option<f64>,
    density_lambda0: Option<f64>,
    pathloss_exponent: f64,
    #[serde(default = "one")]
    bias: f64,
    #[serde(default = "one")]
    load_factor: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIrs {
    height_m: f64,
    elements: u32,
    density_per_m2: Option<f64>,
    density_lambda0: Option<f64>,
    pathloss_exponent: f64,
    local_radius_m: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEval {
    carrier_hz: f64,
    noise_dbm: f64,
    sinr_threshold: Option<f64>,
    sinr_threshold_db: Option<f64>,
    rate_threshold: Option<f64>,
    #[serde(default = "default_priority")]
    priority_factor: f64,
}

fn one() -> f64 {
    1.0
}

fn default_priority() -> f64 {
    0.6
}

fn density(path: &str, absolute: Option<f64>, rel: Option<f64>) -> Result<f64> {
    match (absolute, rel) {
        (Some(a), None) => Ok(a),
        (None, Some(r)) => Ok(r * LAMBDA0),
        (Some(a), Some(r)) if (a - r * LAMBDA0).abs() <= 1e-12 * a.abs() => Ok(a),
        (Some(_), Some(_)) => Err(Error::Config(format!(
            "{path}: density_per_m2 and density_lambda0 disagree"
        ))),
        (None, None) => Err(Error::Config(format!(
            "{path}: one of density_per_m2 or density_lambda0 is required"
        ))),
    }
}

fn sinr_threshold(ev: &RawEval) -> Result<f64> {
    let mut candidates = Vec::new();
    if let Some(g) = ev.sinr_threshold {
        candidates.push(("sinr_threshold", g));
    }
    if let Some(db) = ev.sinr_threshold_db {
        candidates.push(("sinr_threshold_db", super::db_to_linear(db)));
    }
    if let Some(r) = ev.rate_threshold {
        candidates.push(("rate_threshold", r.exp2() - 1.0));
    }
    let Some(&(_, first)) = candidates.first() else {
        return Err(Error::Config(
            "eval: one of sinr_threshold, sinr_threshold_db or rate_threshold is required".into(),
        ));
    };
    for &(name, g) in &candidates[1..] {
        if (g - first).abs() > 1e-9 * first.abs() {
            return Err(Error::Config(format!(
                "eval: {name} is inconsistent with {} (gamma0 = 2^R0 - 1 must hold)",
                candidates[0].0
            )));
        }
    }
    Ok(first)
}

/// Parse a scenario from TOML text. Structural problems (unknown keys, missing
/// fields, inconsistent thresholds) are errors; physical consistency is left
/// to [`Scenario::validate`].
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let tiers = raw
        .tiers
        .into_iter()
        .enumerate()
        .map(|(j, t)| {
            Ok(TierConfig {
                transmit_power_dbm: t.transmit_power_dbm,
                height_m: t.height_m,
                density_per_m2: density(&format!("tiers[{j}]"), t.density_per_m2, t.density_lambda0)?,
                pathloss_exponent: t.pathloss_exponent,
                bias: t.bias,
                load_factor: t.load_factor,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let irs = IrsConfig {
        height_m: raw.irs.height_m,
        elements: raw.irs.elements,
        density_per_m2: density("irs", raw.irs.density_per_m2, raw.irs.density_lambda0)?,
        pathloss_exponent: raw.irs.pathloss_exponent,
        local_radius_m: raw.irs.local_radius_m,
    };
    let eval = EvalConfig {
        carrier_hz: raw.eval.carrier_hz,
        noise_dbm: raw.eval.noise_dbm,
        sinr_threshold: sinr_threshold(&raw.eval)?,
        priority_factor: raw.eval.priority_factor,
    };
    Ok(Scenario {
        tiers,
        irs,
        eval,
        numerics: raw.numerics,
    })
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}
