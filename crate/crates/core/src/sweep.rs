//! Parameter sweeps over either engine, CSV output and CSV comparison.
//!
//! A sweep varies one scenario parameter, named by a path:
//!
//! | path | unit |
//! |---|---|
//! | `eval.sinr_threshold` | linear |
//! | `eval.sinr_threshold_db` | dB |
//! | `eval.rate_threshold` | bit/s/Hz |
//! | `eval.noise_dbm` | dBm |
//! | `eval.priority_factor` | |
//! | `irs.density` | per m² |
//! | `irs.density_lambda0` | multiples of λ₀ |
//! | `irs.elements` | |
//! | `irs.height_m`, `irs.local_radius_m`, `irs.pathloss_exponent` | |
//! | `tiers[i].bias`, `tiers[i].load_factor`, `tiers[i].height_m` | |
//! | `tiers[i].density`, `tiers[i].density_lambda0` | per m², λ₀ |
//! | `tiers[i].transmit_power_dbm`, `tiers[i].pathloss_exponent` | |
//!
//! Tier indices in paths count from 1 (`tiers[1]` is the first tier).
//!
//! # CSV layout
//!
//! One header row, then one row per (series, value, engine) in sweep order:
//!
//! `series, parameter, value, engine, association_1..K, coverage_1..K,
//! overall_coverage, throughput_1..K, throughput, overall_ci_lo,
//! overall_ci_hi, throughput_ci_lo, throughput_ci_hi, throughput_ci_lo_1..K,
//! throughput_ci_hi_1..K, wall_time_s`
//!
//! Confidence-interval fields are empty for analytical rows. Numbers are
//! written in shortest round-trip form.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::analytical::{overall_coverage, CoverageBreakdown};
use crate::error::{Error, Result};
use crate::netmodel::{LinearScenario, Scenario, LAMBDA0};
use crate::simulator::{draw_samples, estimate_from_samples, Interval, SimEstimate};

/// A sweepable scenario parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepParam {
    SinrThreshold,
    SinrThresholdDb,
    RateThreshold,
    NoiseDbm,
    PriorityFactor,
    IrsDensity,
    IrsDensityLambda0,
    IrsElements,
    IrsHeight,
    IrsLocalRadius,
    IrsPathloss,
    /// Zero-based tier index.
    Tier(usize, TierField),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TierField {
    Bias,
    LoadFactor,
    Height,
    Density,
    DensityLambda0,
    TransmitPowerDbm,
    Pathloss,
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(path: &str) -> Result<Self> {
        use SweepParam::*;
        let p = match path {
            "eval.sinr_threshold" => SinrThreshold,
            "eval.sinr_threshold_db" => SinrThresholdDb,
            "eval.rate_threshold" => RateThreshold,
            "eval.noise_dbm" => NoiseDbm,
            "eval.priority_factor" => PriorityFactor,
            "irs.density" | "irs.density_per_m2" => IrsDensity,
            "irs.density_lambda0" => IrsDensityLambda0,
            "irs.elements" => IrsElements,
            "irs.height_m" => IrsHeight,
            "irs.local_radius_m" => IrsLocalRadius,
            "irs.pathloss_exponent" => IrsPathloss,
            _ => return parse_tier_path(path),
        };
        Ok(p)
    }
}

fn parse_tier_path(path: &str) -> Result<SweepParam> {
    let bad = || Error::Config(format!("unknown sweep parameter `{path}`"));
    let rest = path.strip_prefix("tiers[").ok_or_else(bad)?;
    let (idx, field) = rest.split_once("].").ok_or_else(bad)?;
    let idx: usize = idx.parse().map_err(|_| bad())?;
    if idx == 0 {
        return Err(Error::Config(format!("`{path}`: tier indices count from 1")));
    }
    let field = match field {
        "bias" => TierField::Bias,
        "load_factor" => TierField::LoadFactor,
        "height_m" => TierField::Height,
        "density" | "density_per_m2" => TierField::Density,
        "density_lambda0" => TierField::DensityLambda0,
        "transmit_power_dbm" => TierField::TransmitPowerDbm,
        "pathloss_exponent" => TierField::Pathloss,
        _ => return Err(bad()),
    };
    Ok(SweepParam::Tier(idx - 1, field))
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SweepParam::*;
        let s = match self {
            SinrThreshold => "eval.sinr_threshold",
            SinrThresholdDb => "eval.sinr_threshold_db",
            RateThreshold => "eval.rate_threshold",
            NoiseDbm => "eval.noise_dbm",
            PriorityFactor => "eval.priority_factor",
            IrsDensity => "irs.density",
            IrsDensityLambda0 => "irs.density_lambda0",
            IrsElements => "irs.elements",
            IrsHeight => "irs.height_m",
            IrsLocalRadius => "irs.local_radius_m",
            IrsPathloss => "irs.pathloss_exponent",
            Tier(i, field) => {
                let name = match field {
                    TierField::Bias => "bias",
                    TierField::LoadFactor => "load_factor",
                    TierField::Height => "height_m",
                    TierField::Density => "density",
                    TierField::DensityLambda0 => "density_lambda0",
                    TierField::TransmitPowerDbm => "transmit_power_dbm",
                    TierField::Pathloss => "pathloss_exponent",
                };
                return write!(f, "tiers[{}].{name}", i + 1);
            }
        };
        f.write_str(s)
    }
}

impl SweepParam {
    /// Set the parameter on `scenario`. The result is not validated here.
    pub fn apply(&self, scenario: &mut Scenario, value: f64) -> Result<()> {
        use SweepParam::*;
        match *self {
            SinrThreshold => scenario.eval.sinr_threshold = value,
            SinrThresholdDb => scenario.eval.set_sinr_threshold_db(value),
            RateThreshold => scenario.eval.set_rate_threshold(value),
            NoiseDbm => scenario.eval.noise_dbm = value,
            PriorityFactor => scenario.eval.priority_factor = value,
            IrsDensity => scenario.irs.density_per_m2 = value,
            IrsDensityLambda0 => scenario.irs.density_per_m2 = value * LAMBDA0,
            IrsElements => {
                if !(value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
                    return Err(Error::Config(format!(
                        "irs.elements must be a nonnegative integer, got {value}"
                    )));
                }
                scenario.irs.elements = value as u32;
            }
            IrsHeight => scenario.irs.height_m = value,
            IrsLocalRadius => scenario.irs.local_radius_m = value,
            IrsPathloss => scenario.irs.pathloss_exponent = value,
            Tier(i, field) => {
                let count = scenario.tiers.len();
                let t = scenario.tiers.get_mut(i).ok_or_else(|| {
                    Error::Config(format!(
                        "sweep parameter {self} refers to tier {} but the scenario has {count}",
                        i + 1
                    ))
                })?;
                match field {
                    TierField::Bias => t.bias = value,
                    TierField::LoadFactor => t.load_factor = value,
                    TierField::Height => t.height_m = value,
                    TierField::Density => t.density_per_m2 = value,
                    TierField::DensityLambda0 => t.density_per_m2 = value * LAMBDA0,
                    TierField::TransmitPowerDbm => t.transmit_power_dbm = value,
                    TierField::Pathloss => t.pathloss_exponent = value,
                }
            }
        }
        Ok(())
    }

    /// Whether simulated SINR samples are unaffected by this parameter, so a
    /// single batch of samples can serve the whole sweep.
    pub fn threshold_only(&self) -> bool {
        matches!(
            self,
            SweepParam::SinrThreshold | SweepParam::SinrThresholdDb | SweepParam::RateThreshold
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Analytical,
    Simulation,
}

impl Engine {
    pub fn tag(&self) -> &'static str {
        match self {
            Engine::Analytical => "analytical",
            Engine::Simulation => "sim",
        }
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytical" => Ok(Engine::Analytical),
            "sim" | "simulation" => Ok(Engine::Simulation),
            _ => Err(Error::Config(format!("unknown engine `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineSet {
    Analytical,
    Simulation,
    Both,
}

impl EngineSet {
    pub fn engines(&self) -> &'static [Engine] {
        match self {
            EngineSet::Analytical => &[Engine::Analytical],
            EngineSet::Simulation => &[Engine::Simulation],
            EngineSet::Both => &[Engine::Analytical, Engine::Simulation],
        }
    }
}

/// One sweep: a parameter, its values, and how to evaluate each point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Label shared by every row of this sweep; figure presets use it to
    /// record the parameters held fixed.
    pub series: String,
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub engines: EngineSet,
    pub trials: usize,
    pub seed: u64,
}

impl SweepSpec {
    /// Parse `KEY=v1,v2,...`.
    pub fn parse_assignment(arg: &str) -> Result<(SweepParam, Vec<f64>)> {
        let (key, vals) = arg
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("sweep `{arg}`: expected KEY=v1,v2,...")))?;
        let param: SweepParam = key.trim().parse()?;
        let values = vals
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("sweep `{arg}`: `{v}` is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            return Err(Error::Config(format!("sweep `{arg}`: no values")));
        }
        Ok((param, values))
    }
}

/// One evaluated sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub series: String,
    pub param: String,
    pub value: f64,
    pub engine: Engine,
    pub breakdown: CoverageBreakdown,
    pub overall_ci: Option<Interval>,
    pub throughput_ci: Option<Interval>,
    pub per_tier_throughput_ci: Option<Vec<Interval>>,
    pub wall_time_s: f64,
}

fn scenario_at(base: &Scenario, param: SweepParam, value: f64) -> Result<LinearScenario> {
    let mut sc = base.clone();
    param.apply(&mut sc, value)?;
    LinearScenario::new(&sc).map_err(|e| match e {
        Error::InvalidScenario(r) => Error::Config(format!("{param} = {value}:\n{r}")),
        other => other,
    })
}

fn sim_row(spec: &SweepSpec, value: f64, est: SimEstimate, secs: f64) -> SweepRow {
    SweepRow {
        series: spec.series.clone(),
        param: spec.param.to_string(),
        value,
        engine: Engine::Simulation,
        breakdown: est.breakdown,
        overall_ci: Some(est.overall_ci),
        throughput_ci: Some(est.throughput_ci),
        per_tier_throughput_ci: Some(est.per_tier_throughput_ci),
        wall_time_s: secs,
    }
}

/// Evaluate every point of `spec` on `base`. Rows come back in sweep order,
/// analytical rows before simulation rows for each value.
pub fn run_sweep(base: &Scenario, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.values.is_empty() {
        return Err(Error::Config("sweep has no values".into()));
    }
    let scenarios = spec
        .values
        .iter()
        .map(|&v| scenario_at(base, spec.param, v))
        .collect::<Result<Vec<_>>>()?;
    let engines = spec.engines.engines();

    let analytical: Option<Vec<SweepRow>> = if engines.contains(&Engine::Analytical) {
        Some(
            scenarios
                .par_iter()
                .zip(spec.values.par_iter())
                .map(|(lin, &value)| {
                    let t = Instant::now();
                    let breakdown =
                        overall_coverage(lin).map_err(|e| e.with_context(format!("{} = {value}", spec.param)))?;
                    Ok(SweepRow {
                        series: spec.series.clone(),
                        param: spec.param.to_string(),
                        value,
                        engine: Engine::Analytical,
                        breakdown,
                        overall_ci: None,
                        throughput_ci: None,
                        per_tier_throughput_ci: None,
                        wall_time_s: t.elapsed().as_secs_f64(),
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    let simulated: Option<Vec<SweepRow>> = if engines.contains(&Engine::Simulation) {
        let mut rows = Vec::with_capacity(spec.values.len());
        if spec.param.threshold_only() {
            let t = Instant::now();
            let samples = draw_samples(&scenarios[0], spec.trials, spec.seed)?;
            let draw_secs = t.elapsed().as_secs_f64() / spec.values.len() as f64;
            for (lin, &value) in scenarios.iter().zip(&spec.values) {
                let t = Instant::now();
                let est = estimate_from_samples(lin, &samples)?;
                rows.push(sim_row(spec, value, est, draw_secs + t.elapsed().as_secs_f64()));
            }
        } else {
            for (lin, &value) in scenarios.iter().zip(&spec.values) {
                let t = Instant::now();
                let samples = draw_samples(lin, spec.trials, spec.seed)?;
                let est = estimate_from_samples(lin, &samples)?;
                rows.push(sim_row(spec, value, est, t.elapsed().as_secs_f64()));
            }
        }
        Some(rows)
    } else {
        None
    };

    let mut out = Vec::new();
    for i in 0..spec.values.len() {
        if let Some(a) = &analytical {
            out.push(a[i].clone());
        }
        if let Some(s) = &simulated {
            out.push(s[i].clone());
        }
    }
    Ok(out)
}

/// Figure presets: the sweeps behind the coverage-vs-threshold,
/// throughput-vs-IRS-density and throughput-vs-bias curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Coverage against SINR threshold for several IRS and pico densities.
    Fig2,
    /// Per-tier throughput against IRS density for several pico densities.
    Fig3,
    /// Throughput against pico bias for several IRS densities.
    Fig4,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            "fig4" => Ok(Figure::Fig4),
            _ => Err(Error::Config(format!("unknown figure `{s}` (fig2, fig3, fig4)"))),
        }
    }
}

pub const FIG2_THRESHOLDS_DB: [f64; 7] = [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0];
pub const FIG2_IRS_LAMBDA0: [f64; 3] = [0.0, 200.0, 400.0];
pub const FIG2_PICO_LAMBDA0: [f64; 2] = [50.0, 100.0];
pub const FIG3_IRS_LAMBDA0: [f64; 5] = [0.0, 100.0, 200.0, 400.0, 800.0];
pub const FIG3_PICO_LAMBDA0: [f64; 2] = [50.0, 100.0];
pub const FIG4_BIAS: [f64; 7] = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0];
pub const FIG4_IRS_LAMBDA0: [f64; 3] = [0.0, 200.0, 400.0];

/// Index of the pico tier in figure presets: the last tier.
fn pico_tier(base: &Scenario) -> Result<usize> {
    if base.tiers.len() < 2 {
        return Err(Error::Config(
            "figure presets need at least two tiers (macro first, pico last)".into(),
        ));
    }
    Ok(base.tiers.len() - 1)
}

impl Figure {
    /// The (fixed-parameter scenario, sweep) pairs making up the figure.
    pub fn sweeps(
        &self,
        base: &Scenario,
        engines: EngineSet,
        trials: usize,
        seed: u64,
    ) -> Result<Vec<(Scenario, SweepSpec)>> {
        let pico = pico_tier(base)?;
        let spec = |series: String, param: SweepParam, values: &[f64]| SweepSpec {
            series,
            param,
            values: values.to_vec(),
            engines,
            trials,
            seed,
        };
        let mut out = Vec::new();
        match self {
            Figure::Fig2 => {
                for &lp in &FIG2_PICO_LAMBDA0 {
                    for &li in &FIG2_IRS_LAMBDA0 {
                        let mut sc = base.clone();
                        sc.tiers[pico].density_per_m2 = lp * LAMBDA0;
                        sc.irs.density_per_m2 = li * LAMBDA0;
                        let series = format!("pico_density_lambda0={lp};irs_density_lambda0={li}");
                        out.push((sc, spec(series, SweepParam::SinrThresholdDb, &FIG2_THRESHOLDS_DB)));
                    }
                }
            }
            Figure::Fig3 => {
                for &lp in &FIG3_PICO_LAMBDA0 {
                    let mut sc = base.clone();
                    sc.tiers[pico].density_per_m2 = lp * LAMBDA0;
                    let series = format!("pico_density_lambda0={lp}");
                    out.push((sc, spec(series, SweepParam::IrsDensityLambda0, &FIG3_IRS_LAMBDA0)));
                }
            }
            Figure::Fig4 => {
                for &li in &FIG4_IRS_LAMBDA0 {
                    let mut sc = base.clone();
                    sc.irs.density_per_m2 = li * LAMBDA0;
                    let series = format!("irs_density_lambda0={li}");
                    out.push((sc, spec(series, SweepParam::Tier(pico, TierField::Bias), &FIG4_BIAS)));
                }
            }
        }
        Ok(out)
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV header for `tiers` tiers.
pub fn csv_header(tiers: usize) -> Vec<String> {
    let mut h: Vec<String> = ["series", "parameter", "value", "engine"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend((1..=tiers).map(|k| format!("association_{k}")));
    h.extend((1..=tiers).map(|k| format!("coverage_{k}")));
    h.push("overall_coverage".into());
    h.extend((1..=tiers).map(|k| format!("throughput_{k}")));
    h.push("throughput".into());
    for name in ["overall_ci_lo", "overall_ci_hi", "throughput_ci_lo", "throughput_ci_hi"] {
        h.push(name.into());
    }
    h.extend((1..=tiers).map(|k| format!("throughput_ci_lo_{k}")));
    h.extend((1..=tiers).map(|k| format!("throughput_ci_hi_{k}")));
    h.push("wall_time_s".into());
    h
}

fn csv_record(row: &SweepRow) -> Vec<String> {
    let b = &row.breakdown;
    let mut r = vec![
        row.series.clone(),
        row.param.clone(),
        row.value.to_string(),
        row.engine.tag().to_string(),
    ];
    r.extend(b.per_tier_association.iter().map(f64::to_string));
    r.extend(b.per_tier_coverage.iter().map(f64::to_string));
    r.push(b.overall_coverage.to_string());
    r.extend(b.per_tier_throughput.iter().map(f64::to_string));
    r.push(b.throughput_bps_hz_per_m2.to_string());
    r.push(fmt_opt(row.overall_ci.map(|i| i.lo)));
    r.push(fmt_opt(row.overall_ci.map(|i| i.hi)));
    r.push(fmt_opt(row.throughput_ci.map(|i| i.lo)));
    r.push(fmt_opt(row.throughput_ci.map(|i| i.hi)));
    let k = b.per_tier_association.len();
    match &row.per_tier_throughput_ci {
        Some(ci) => {
            r.extend(ci.iter().map(|i| i.lo.to_string()));
            r.extend(ci.iter().map(|i| i.hi.to_string()));
        }
        None => r.extend(std::iter::repeat_n(String::new(), 2 * k)),
    }
    r.push(row.wall_time_s.to_string());
    r
}

/// Write rows as CSV. Every row must have the same tier count.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let tiers = rows.first().map_or(0, |r| r.breakdown.per_tier_association.len());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(tiers))?;
    for row in rows {
        if row.breakdown.per_tier_association.len() != tiers {
            return Err(Error::Config("rows with different tier counts in one CSV".into()));
        }
        w.write_record(csv_record(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(rows: &[SweepRow], path: &Path) -> Result<()> {
    write_csv(rows, std::fs::File::create(path)?)
}

/// Gnuplot data layout: one block per (series, engine), blocks separated by
/// two blank lines so `index` selects them. Columns: value, overall
/// coverage, throughput, then per-tier coverage and per-tier throughput.
pub fn write_gnuplot<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    let mut keys: Vec<(String, Engine)> = Vec::new();
    for r in rows {
        let key = (r.series.clone(), r.engine);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    for (i, (series, engine)) in keys.iter().enumerate() {
        if i > 0 {
            writeln!(out, "\n")?;
        }
        writeln!(out, "# {series} {}", engine.tag())?;
        for r in rows.iter().filter(|r| &r.series == series && r.engine == *engine) {
            let b = &r.breakdown;
            write!(out, "{} {} {}", r.value, b.overall_coverage, b.throughput_bps_hz_per_m2)?;
            for c in &b.per_tier_coverage {
                write!(out, " {c}")?;
            }
            for t in &b.per_tier_throughput {
                write!(out, " {t}")?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Largest deviation of one metric column between two CSVs.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricDeviation {
    pub metric: String,
    pub max_abs: f64,
    /// `series` and `value` of the row where the maximum occurs.
    pub at_series: String,
    pub at_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub tolerance: f64,
    pub metrics: Vec<MetricDeviation>,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.metrics.iter().all(|m| m.max_abs <= self.tolerance)
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.metrics {
            let verdict = if m.max_abs <= self.tolerance { "ok" } else { "FAIL" };
            writeln!(
                f,
                "{:<20} max |Δ| = {:<12.6e} at series `{}`, value {}  {verdict}",
                m.metric, m.max_abs, m.at_series, m.at_value
            )?;
        }
        write!(
            f,
            "{} at tolerance {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.tolerance
        )
    }
}

/// Metric columns compared by [`compare_csv`]: association, coverage and
/// throughput, per tier and overall.
fn is_metric(name: &str) -> bool {
    (name.starts_with("association_")
        || name.starts_with("coverage_")
        || name.starts_with("throughput_") && !name.contains("_ci_"))
        || name == "overall_coverage"
        || name == "throughput"
}

struct Table {
    metrics: Vec<String>,
    rows: Vec<(String, String, f64, Vec<f64>)>,
}

fn read_table<R: std::io::Read>(input: R, engine: Option<Engine>, label: &str) -> Result<Table> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("{label}: missing column `{name}`")))
    };
    let (c_series, c_param, c_value, c_engine) = (col("series")?, col("parameter")?, col("value")?, col("engine")?);
    let metric_cols: Vec<(usize, String)> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| is_metric(h))
        .map(|(i, h)| (i, h.to_string()))
        .collect();
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if let Some(e) = engine {
            if rec.get(c_engine) != Some(e.tag()) {
                continue;
            }
        }
        let num = |i: usize| -> Result<f64> {
            rec.get(i).unwrap_or("").parse::<f64>().map_err(|_| {
                Error::Config(format!(
                    "{label}: row {}: column {} is not a number",
                    line + 2,
                    &header[i]
                ))
            })
        };
        let key = (
            rec.get(c_series).unwrap_or("").to_string(),
            rec.get(c_param).unwrap_or("").to_string(),
            num(c_value)?,
        );
        let vals = metric_cols.iter().map(|(i, _)| num(*i)).collect::<Result<Vec<_>>>()?;
        if rows
            .iter()
            .any(|r: &(String, String, f64, Vec<f64>)| (&r.0, &r.1, r.2) == (&key.0, &key.1, key.2))
        {
            return Err(Error::Config(format!(
                "{label}: duplicate grid point (series `{}`, {} = {}); select one engine",
                key.0, key.1, key.2
            )));
        }
        rows.push((key.0, key.1, key.2, vals));
    }
    Ok(Table {
        metrics: metric_cols.into_iter().map(|(_, h)| h).collect(),
        rows,
    })
}

/// Compare two sweep CSVs point by point. Rows are matched on (series,
/// parameter, value); `engine_a`/`engine_b` restrict each file to one
/// engine. Grids that do not match exactly are a configuration error.
pub fn compare_csv<A: std::io::Read, B: std::io::Read>(
    a: A,
    b: B,
    tolerance: f64,
    engine_a: Option<Engine>,
    engine_b: Option<Engine>,
) -> Result<CompareReport> {
    let ta = read_table(a, engine_a, "first file")?;
    let tb = read_table(b, engine_b, "second file")?;
    if ta.metrics != tb.metrics {
        return Err(Error::Config(format!(
            "grid mismatch: metric columns differ ({:?} vs {:?})",
            ta.metrics, tb.metrics
        )));
    }
    if ta.rows.len() != tb.rows.len() {
        return Err(Error::Config(format!(
            "grid mismatch: {} rows vs {} rows",
            ta.rows.len(),
            tb.rows.len()
        )));
    }
    let mut metrics: Vec<MetricDeviation> = ta
        .metrics
        .iter()
        .map(|m| MetricDeviation {
            metric: m.clone(),
            max_abs: 0.0,
            at_series: String::new(),
            at_value: f64::NAN,
        })
        .collect();
    for (series, param, value, va) in &ta.rows {
        let vb = tb
            .rows
            .iter()
            .find(|r| &r.0 == series && &r.1 == param && r.2 == *value)
            .map(|r| &r.3)
            .ok_or_else(|| {
                Error::Config(format!(
                    "grid mismatch: (series `{series}`, {param} = {value}) missing from the second file"
                ))
            })?;
        for (m, (x, y)) in metrics.iter_mut().zip(va.iter().zip(vb)) {
            let d = (x - y).abs();
            if d > m.max_abs || m.at_value.is_nan() {
                m.max_abs = d;
                m.at_series = series.clone();
                m.at_value = *value;
            }
        }
    }
    Ok(CompareReport { tolerance, metrics })
}

pub fn compare_files(
    a: &Path,
    b: &Path,
    tolerance: f64,
    engine_a: Option<Engine>,
    engine_b: Option<Engine>,
) -> Result<CompareReport> {
    compare_csv(
        std::fs::File::open(a)?,
        std::fs::File::open(b)?,
        tolerance,
        engine_a,
        engine_b,
    )
}
