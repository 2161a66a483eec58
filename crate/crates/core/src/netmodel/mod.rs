//! Scenario description shared by both engines.
//!
//! Configuration is kept in the units people write down (dBm, meters,
//! per-m² densities). [`LinearScenario`] is the form every computation
//! consumes: watts, the reference gain β, and thinned densities.

mod config;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specialfn::LaplaceInverter;

pub use config::{load_scenario, parse_scenario};

/// Baseline density used to express the reference scenario, per m².
pub const LAMBDA0: f64 = 5e-6;

/// Propagation speed used for the reference gain, m/s.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TierConfig {
    pub transmit_power_dbm: f64,
    pub height_m: f64,
    pub density_per_m2: f64,
    pub pathloss_exponent: f64,
    pub bias: f64,
    pub load_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrsConfig {
    pub height_m: f64,
    pub elements: u32,
    pub density_per_m2: f64,
    pub pathloss_exponent: f64,
    pub local_radius_m: f64,
}

impl IrsConfig {
    /// Probability that no IRS lies inside the local region.
    pub fn empty_region_prob(&self) -> f64 {
        (-self.density_per_m2 * std::f64::consts::PI * self.local_radius_m.powi(2)).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalConfig {
    pub carrier_hz: f64,
    pub noise_dbm: f64,
    /// Linear SINR threshold γ₀.
    pub sinr_threshold: f64,
    /// Weight M of the floor/ceil interpolation for non-integer Gamma shapes.
    pub priority_factor: f64,
}

impl EvalConfig {
    /// Reference channel gain at 1 m, `(4π f_c / c)^-2`.
    pub fn beta(&self) -> f64 {
        beta_from_carrier(self.carrier_hz)
    }

    /// Rate threshold R₀ = log₂(1 + γ₀) in bit/s/Hz.
    pub fn rate_threshold(&self) -> f64 {
        (1.0 + self.sinr_threshold).log2()
    }

    pub fn set_rate_threshold(&mut self, rate: f64) {
        self.sinr_threshold = rate.exp2() - 1.0;
    }

    pub fn sinr_threshold_db(&self) -> f64 {
        10.0 * self.sinr_threshold.log10()
    }

    pub fn set_sinr_threshold_db(&mut self, db: f64) {
        self.sinr_threshold = db_to_linear(db);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    /// Relative tolerance of the outer adaptive quadratures.
    pub quad_rel_tol: f64,
    /// Infinite radial integrals stop where the void-probability exponent
    /// reaches this value (the envelope is below `exp(-tail_cutoff_exponent)`).
    pub tail_cutoff_exponent: f64,
    /// Gamma shapes above this use the mean-signal CDF branch.
    pub tau_threshold: f64,
    pub laplace: LaplaceInverter,
    /// Half-width of the square simulation window, meters.
    pub sim_window_half_m: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            quad_rel_tol: 1e-6,
            tail_cutoff_exponent: 30.0,
            tau_threshold: 20.0,
            laplace: LaplaceInverter::default(),
            sim_window_half_m: 2000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub tiers: Vec<TierConfig>,
    pub irs: IrsConfig,
    pub eval: EvalConfig,
    #[serde(default)]
    pub numerics: Numerics,
}

impl Scenario {
    /// Two-tier macro/pico network with the reference parameter set.
    ///
    /// Load factors are not part of the reference set; they default to 1.
    pub fn reference() -> Self {
        Scenario {
            tiers: vec![
                TierConfig {
                    transmit_power_dbm: 53.0,
                    height_m: 20.0,
                    density_per_m2: 10.0 * LAMBDA0,
                    pathloss_exponent: 4.0,
                    bias: 1.0,
                    load_factor: 1.0,
                },
                TierConfig {
                    transmit_power_dbm: 33.0,
                    height_m: 10.0,
                    density_per_m2: 50.0 * LAMBDA0,
                    pathloss_exponent: 3.5,
                    bias: 1.0,
                    load_factor: 1.0,
                },
            ],
            irs: IrsConfig {
                height_m: 1.0,
                elements: 1000,
                density_per_m2: 200.0 * LAMBDA0,
                pathloss_exponent: 3.0,
                local_radius_m: 50.0,
            },
            eval: EvalConfig {
                carrier_hz: 2.0e9,
                noise_dbm: -117.0,
                // R₀ = 1 bit/s/Hz
                sinr_threshold: 1.0,
                priority_factor: 0.6,
            },
            numerics: Numerics::default(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.tiers.is_empty() {
            report.push("tiers", "at least one tier is required");
        }
        for (j, t) in self.tiers.iter().enumerate() {
            let p = |f: &str| format!("tiers[{j}].{f}");
            if !t.transmit_power_dbm.is_finite() {
                report.push(p("transmit_power_dbm"), "must be finite");
            }
            if !(t.pathloss_exponent > 2.0) {
                report.push(p("pathloss_exponent"), "pathloss_exponent > 2");
            }
            if !(t.density_per_m2 > 0.0) || !t.density_per_m2.is_finite() {
                report.push(p("density_per_m2"), "density_per_m2 > 0");
            }
            if !(t.height_m >= 0.0) || !t.height_m.is_finite() {
                report.push(p("height_m"), "height_m >= 0");
            }
            if !(t.load_factor > 0.0 && t.load_factor <= 1.0) {
                report.push(p("load_factor"), "0 < load_factor <= 1");
            }
            if !(t.bias > 0.0) || !t.bias.is_finite() {
                report.push(p("bias"), "bias > 0");
            }
            if t.height_m.is_finite() && self.irs.height_m > t.height_m {
                report.push(
                    "irs.height_m",
                    format!("IRS height must not exceed tiers[{j}].height_m (BS-IRS kernel must stay real)"),
                );
            }
        }
        let irs = &self.irs;
        if !(irs.pathloss_exponent > 2.0) {
            report.push("irs.pathloss_exponent", "pathloss_exponent > 2");
        }
        if irs.elements < 1 {
            report.push("irs.elements", "elements >= 1");
        }
        if !(irs.local_radius_m > 0.0) || !irs.local_radius_m.is_finite() {
            report.push("irs.local_radius_m", "local_radius_m > 0");
        }
        if !(irs.height_m >= 0.0) || !irs.height_m.is_finite() {
            report.push("irs.height_m", "height_m >= 0");
        }
        if !(irs.density_per_m2 >= 0.0) || !irs.density_per_m2.is_finite() {
            report.push("irs.density_per_m2", "density_per_m2 >= 0");
        }
        let ev = &self.eval;
        if !(ev.carrier_hz > 0.0) || !ev.carrier_hz.is_finite() {
            report.push("eval.carrier_hz", "carrier_hz > 0");
        }
        if !ev.noise_dbm.is_finite() && ev.noise_dbm != f64::NEG_INFINITY {
            report.push("eval.noise_dbm", "must be finite or -inf (noiseless)");
        }
        if !(ev.sinr_threshold > 0.0) || !ev.sinr_threshold.is_finite() {
            report.push("eval.sinr_threshold", "sinr_threshold > 0");
        }
        if !(ev.priority_factor > 0.0 && ev.priority_factor < 1.0) {
            report.push("eval.priority_factor", "0 < priority_factor < 1");
        }
        let nu = &self.numerics;
        if !(nu.quad_rel_tol > 0.0 && nu.quad_rel_tol < 1e-2) {
            report.push("numerics.quad_rel_tol", "0 < quad_rel_tol < 1e-2");
        }
        if !(nu.tail_cutoff_exponent >= 5.0) || !nu.tail_cutoff_exponent.is_finite() {
            report.push("numerics.tail_cutoff_exponent", "tail_cutoff_exponent >= 5");
        }
        if !(nu.tau_threshold >= 1.0 && nu.tau_threshold <= crate::specialfn::bell::MAX_ORDER as f64) {
            report.push(
                "numerics.tau_threshold",
                format!("1 <= tau_threshold <= {}", crate::specialfn::bell::MAX_ORDER),
            );
        }
        if let Err(msg) = nu.laplace.check() {
            report.push("numerics.laplace", msg);
        }
        if !(nu.sim_window_half_m > 0.0) || !nu.sim_window_half_m.is_finite() {
            report.push("numerics.sim_window_half_m", "sim_window_half_m > 0");
        }
        report
    }

    /// Linear-unit view. The scenario should already have passed
    /// [`Scenario::validate`]; [`LinearScenario::new`] enforces that.
    pub fn linearize(&self) -> LinearScenario {
        LinearScenario {
            tiers: self
                .tiers
                .iter()
                .map(|t| LinearTier {
                    power_w: dbm_to_watts(t.transmit_power_dbm),
                    height_m: t.height_m,
                    density: t.density_per_m2,
                    active_density: t.load_factor * t.density_per_m2,
                    alpha: t.pathloss_exponent,
                    bias: t.bias,
                    load_factor: t.load_factor,
                })
                .collect(),
            irs: self.irs.clone(),
            beta: self.eval.beta(),
            noise_w: dbm_to_watts(self.eval.noise_dbm),
            sinr_threshold: self.eval.sinr_threshold,
            rate_threshold: self.eval.rate_threshold(),
            priority_factor: self.eval.priority_factor,
            numerics: self.numerics.clone(),
        }
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearTier {
    pub power_w: f64,
    pub height_m: f64,
    /// λ_j, all base stations (used by association).
    pub density: f64,
    /// λ'_j = p_j λ_j, base stations active on the typical user's resource.
    pub active_density: f64,
    pub alpha: f64,
    pub bias: f64,
    pub load_factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearScenario {
    pub tiers: Vec<LinearTier>,
    pub irs: IrsConfig,
    pub beta: f64,
    pub noise_w: f64,
    pub sinr_threshold: f64,
    pub rate_threshold: f64,
    pub priority_factor: f64,
    pub numerics: Numerics,
}

impl LinearScenario {
    /// Validate then linearize.
    pub fn new(scenario: &Scenario) -> Result<Self> {
        let report = scenario.validate();
        if !report.is_ok() {
            return Err(Error::InvalidScenario(report));
        }
        Ok(scenario.linearize())
    }

    pub fn tier_count(&self) -> usize {
        self.tiers.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.into(),
            message: message.into(),
        });
    }

    pub fn mentions(&self, path: &str) -> bool {
        self.violations.iter().any(|v| v.path == path)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "  {}: {}", v.path, v.message)?;
        }
        Ok(())
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn beta_from_carrier(carrier_hz: f64) -> f64 {
    (4.0 * std::f64::consts::PI * carrier_hz / SPEED_OF_LIGHT).powi(-2)
}
