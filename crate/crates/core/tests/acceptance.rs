//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.
//!
//! Simulation criteria use 10⁴ trials per point on a 4000 m × 4000 m window.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{kernels, props};
use irshcn::netmodel::{Scenario, LAMBDA0};
use irshcn::simulator::{estimate, NetworkRealization};
use irshcn::sweep::{
    run_sweep, Engine, EngineSet, SweepParam, SweepRow, SweepSpec, TierField, FIG2_THRESHOLDS_DB, FIG3_IRS_LAMBDA0,
    FIG4_BIAS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRIALS: usize = 10_000;
const SEED: u64 = 20_240_601;
const PICO: usize = 1;
const MACRO: usize = 0;

struct Verdict {
    pass: bool,
    detail: String,
}

type Outcome = Result<Verdict, String>;

fn verdict(pass: bool, detail: String) -> Outcome {
    Ok(Verdict { pass, detail })
}

fn sweep(base: &Scenario, param: SweepParam, values: &[f64]) -> Result<Vec<SweepRow>, String> {
    let spec = SweepSpec {
        series: String::new(),
        param,
        values: values.to_vec(),
        engines: EngineSet::Both,
        trials: TRIALS,
        seed: SEED,
    };
    run_sweep(base, &spec).map_err(|e| e.to_string())
}

fn split(rows: &[SweepRow]) -> (Vec<&SweepRow>, Vec<&SweepRow>) {
    rows.iter().partition(|r| r.engine == Engine::Analytical)
}

fn with_irs(lambda0: f64) -> Scenario {
    let mut sc = Scenario::reference();
    sc.irs.density_per_m2 = lambda0 * LAMBDA0;
    sc
}

fn classical_oracle(budget: Duration) -> Outcome {
    let t = Instant::now();
    let mut sc = Scenario::reference();
    sc.tiers.truncate(1);
    sc.tiers[0].height_m = 0.0;
    sc.tiers[0].pathloss_exponent = 4.0;
    sc.tiers[0].load_factor = 1.0;
    sc.irs.density_per_m2 = 0.0;
    sc.irs.height_m = 0.0;
    sc.eval.noise_dbm = f64::NEG_INFINITY;
    sc.eval.set_sinr_threshold_db(0.0);
    let want = 1.0 / (1.0 + PI / 4.0);
    let lin = sc.linearize();
    let an = irshcn::analytical::overall_coverage(&lin).map_err(|e| e.to_string())?;
    let sim = estimate(&lin, TRIALS, SEED).map_err(|e| e.to_string())?;
    let an_err = (an.overall_coverage - want).abs();
    let ci = sim.overall_ci;
    let elapsed = t.elapsed();
    verdict(
        an_err < 0.01 && ci.contains(want) && elapsed < budget,
        format!(
            "target {want:.4}; analytical {:.4} (|err| {an_err:.1e} < 0.01); sim {:.4}, 95% CI [{:.4}, {:.4}]",
            an.overall_coverage, sim.breakdown.overall_coverage, ci.lo, ci.hi
        ),
    )
}

fn threshold_agreement(rows: &[SweepRow], budget: Duration, elapsed: Duration) -> Outcome {
    let window = 2.0 * NetworkRealization::window_half_width(&Scenario::reference().linearize());
    let (an, sim) = split(rows);
    let mut worst = (0.0, 0.0);
    for (a, s) in an.iter().zip(&sim) {
        let d = (a.breakdown.overall_coverage - s.breakdown.overall_coverage).abs();
        if d >= worst.0 {
            worst = (d, a.value);
        }
    }
    verdict(
        worst.0 <= 0.03 && an.len() == FIG2_THRESHOLDS_DB.len() && window >= 4000.0 && elapsed < budget,
        format!(
            "max |analytical − sim| = {:.4} at {} dB (limit 0.03) over {} thresholds, window {window:.0} m",
            worst.0,
            worst.1,
            an.len()
        ),
    )
}

fn irs_gain(with: &[SweepRow], without: &[SweepRow]) -> Outcome {
    let gain = |engine: Engine| {
        let pick = |rows: &[SweepRow]| -> Vec<(f64, f64)> {
            rows.iter()
                .filter(|r| r.engine == engine)
                .map(|r| (r.value, r.breakdown.overall_coverage))
                .collect()
        };
        pick(with)
            .iter()
            .zip(pick(without))
            .map(|(a, b)| (a.1 - b.1, a.0))
            .fold((f64::NEG_INFINITY, 0.0), |m, x| if x.0 > m.0 { x } else { m })
    };
    let (ga, at_a) = gain(Engine::Analytical);
    let (gs, at_s) = gain(Engine::Simulation);
    verdict(
        ga > 0.3 && gs > 0.3,
        format!("max gain λ_I 200λ₀ vs 0: analytical {ga:.4} at {at_a} dB, sim {gs:.4} at {at_s} dB (need > 0.3)"),
    )
}

/// No simulated value may sit wholly below the 95% interval of an earlier
/// point, and no analytical value may fall below an earlier one by more than
/// that point's simulated half-width.
fn nondecreasing_within_ci(an: &[f64], sim: &[(f64, f64, f64)]) -> Result<(), String> {
    for j in 1..an.len() {
        for i in 0..j {
            let (_, lo, hi) = sim[i];
            if sim[j].2 < lo {
                return Err(format!("sim at point {j} lies below the interval of point {i}"));
            }
            let half = 0.5 * (hi - lo);
            if an[j] < an[i] - half {
                return Err(format!(
                    "analytical at point {j} is {:.3e} below point {i} (CI half-width {half:.3e})",
                    an[i] - an[j]
                ));
            }
        }
    }
    Ok(())
}

fn tier_series(rows: &[&SweepRow], tier: usize) -> Vec<f64> {
    rows.iter().map(|r| r.breakdown.per_tier_throughput[tier]).collect()
}

fn tier_ci_series(rows: &[&SweepRow], tier: usize) -> Vec<(f64, f64, f64)> {
    rows.iter()
        .map(|r| {
            let ci = r.per_tier_throughput_ci.as_ref().expect("sim rows carry intervals")[tier];
            (r.breakdown.per_tier_throughput[tier], ci.lo, ci.hi)
        })
        .collect()
}

fn relative_spread(v: &[f64]) -> f64 {
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    (max - min) / min
}

fn saturation(rows: &[SweepRow]) -> Outcome {
    let (an, sim) = split(rows);
    let pico = tier_series(&an, PICO);
    let pico_sim = tier_ci_series(&sim, PICO);
    let monotone = nondecreasing_within_ci(&pico, &pico_sim);
    let n = pico.len();
    let first = pico[1] - pico[0];
    let last = pico[n - 1] - pico[n - 2];
    let ratio = last / first;
    let macro_an = relative_spread(&tier_series(&an, MACRO));
    let macro_sim = relative_spread(
        &sim.iter()
            .map(|r| r.breakdown.per_tier_throughput[MACRO])
            .collect::<Vec<_>>(),
    );
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ");
    verdict(
        monotone.is_ok() && ratio < 0.25 && macro_an < 0.1 && macro_sim < 0.1,
        format!(
            "pico T [{}] {}; last/first increment {ratio:.3} (need < 0.25); macro spread analytical {:.1}%, sim {:.1}% (need < 10%)",
            fmt(&pico),
            monotone.err().unwrap_or_else(|| "non-decreasing".into()),
            100.0 * macro_an,
            100.0 * macro_sim
        ),
    )
}

fn bias_convergence(rows: &[SweepRow]) -> Outcome {
    let (an, sim) = split(rows);
    let total: Vec<f64> = an.iter().map(|r| r.breakdown.throughput_bps_hz_per_m2).collect();
    let total_sim: Vec<(f64, f64, f64)> = sim
        .iter()
        .map(|r| {
            let ci = r.throughput_ci.expect("sim rows carry intervals");
            (r.breakdown.throughput_bps_hz_per_m2, ci.lo, ci.hi)
        })
        .collect();
    let monotone = nondecreasing_within_ci(&total, &total_sim);
    let gap = |r: &SweepRow| {
        let t = r.breakdown.throughput_bps_hz_per_m2;
        (t - r.breakdown.per_tier_throughput[PICO]).abs() / t
    };
    let gap_an = gap(an[an.len() - 1]);
    let gap_sim = gap(sim[sim.len() - 1]);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ");
    verdict(
        monotone.is_ok() && gap_an < 0.05 && gap_sim < 0.05,
        format!(
            "T over B₂ [{}] {}; pico gap at B₂ = {}: analytical {:.1}%, sim {:.1}% (need < 5%)",
            fmt(&total),
            monotone.err().unwrap_or_else(|| "non-decreasing".into()),
            FIG4_BIAS[FIG4_BIAS.len() - 1],
            100.0 * gap_an,
            100.0 * gap_sim
        ),
    )
}

fn kernel_oracles(budget: Duration) -> Outcome {
    let t = Instant::now();
    let h = kernels::hyp2f1_oracle();
    let l = kernels::inverse_laplace_oracle();
    let d = kernels::exp_v_derivatives_oracle();
    let u = kernels::u_quadrature_oracle();
    let elapsed = t.elapsed();
    verdict(
        h.error <= 1e-10 && h.points >= 1000 && l.error <= 1e-6 && d.error <= 1e-5 && u.error <= 1e-8 && elapsed < budget,
        format!(
            "2F1 {:.1e} rel over {} points; inverse Laplace {:.1e} abs; derivatives to order 8 {:.1e} rel; U {:.1e} rel",
            h.error, h.points, l.error, d.error, u.error
        ),
    )
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let unit6 = |rng: &mut ChaCha8Rng| -> [f64; 6] { std::array::from_fn(|_| rng.random::<f64>()) };
    let mut failures = Vec::new();
    let mut check = |name: &str, defect: f64, limit: f64| {
        if defect.is_nan() || defect > limit {
            failures.push(format!("{name} {defect:.1e} > {limit:.0e}"));
        }
    };

    let (mut assoc, mut pdf): (f64, f64) = (0.0, 0.0);
    for _ in 0..32 {
        let k = rng.random_range(1..=3);
        let sc = props::scenario_with((0..k).map(|_| props::tier_from_unit(unit6(&mut rng))).collect());
        assoc = assoc.max(props::association_defect(&sc));
        pdf = pdf.max(props::pdf_mass_defect(&sc));
    }
    check("association", assoc, 1e-6);
    check("pdf", pdf, 1e-6);

    let mut gamma: f64 = 0.0;
    let mut scatter: f64 = 0.0;
    let mut mono: f64 = 0.0;
    for _ in 0..32 {
        let mean = 10f64.powf(rng.random_range(-15.0..3.0));
        let cv = rng.random_range(0.01..10.0);
        gamma = gamma.max(props::gamma_match_defect(mean, (cv * mean).powi(2)));
        scatter = scatter.max(props::scattering_defect(
            rng.random_range(0.0..50.0),
            rng.random_range(1.0..800.0),
            rng.random_range(2.2..4.5),
        ));
        let k = rng.random_range(0..2);
        let z = Scenario::reference().tiers[k].height_m * rng.random_range(1.0..8.0);
        let d0 = rng.random_bool(0.5).then(|| rng.random_range(0.0..50.0));
        mono = mono.max(props::coverage_monotonicity_defect(k, z, d0));
    }
    check("gamma match", gamma, 1e-12);
    check("E_r identities", scatter, 1e-9);
    check("coverage monotonicity", mono, 1e-9);

    let mut scale: f64 = 0.0;
    for irs in [0.0, 200.0] {
        for db in [-20.0, 17.0] {
            scale = scale.max(props::analytical_scale_defect(&with_irs(irs), db));
        }
    }
    check("analytical scale invariance", scale, 1e-8);
    check(
        "sim scale invariance",
        props::simulated_scale_defect(&Scenario::reference(), 13.0, 300, 17),
        1e-9,
    );
    let repeat = props::simulator_repeats(&Scenario::reference(), 400, 99);
    if !repeat {
        failures.push("simulator not deterministic".into());
    }
    let pass = failures.is_empty();
    verdict(
        pass,
        if pass {
            format!(
                "association {assoc:.1e}, pdf {pdf:.1e}, gamma {gamma:.1e}, E_r {scatter:.1e}, monotonicity {mono:.1e}, scale {scale:.1e}, determinism ok"
            )
        } else {
            failures.join("; ")
        },
    )
}

fn report(id: usize, name: &str, started: Instant, outcome: Outcome) -> bool {
    let secs = started.elapsed().as_secs_f64();
    let (pass, detail) = match outcome {
        Ok(v) => (v.pass, v.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "{} [{id}] {name} ({secs:.1} s): {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn main() -> ExitCode {
    let mut results = Vec::new();

    let t = Instant::now();
    results.push(report(
        1,
        "classical oracle",
        t,
        classical_oracle(Duration::from_secs(60)),
    ));

    let t = Instant::now();
    let irs200 = sweep(&with_irs(200.0), SweepParam::SinrThresholdDb, &FIG2_THRESHOLDS_DB);
    let outcome = irs200
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|rows| threshold_agreement(rows, Duration::from_secs(600), t.elapsed()));
    results.push(report(2, "analytical vs simulation", t, outcome));

    let t = Instant::now();
    let outcome = sweep(&with_irs(0.0), SweepParam::SinrThresholdDb, &FIG2_THRESHOLDS_DB)
        .and_then(|without| irs_gain(irs200.as_ref().map_err(Clone::clone)?, &without));
    results.push(report(3, "IRS coverage gain", t, outcome));

    let t = Instant::now();
    let outcome =
        sweep(&Scenario::reference(), SweepParam::IrsDensityLambda0, &FIG3_IRS_LAMBDA0).and_then(|r| saturation(&r));
    results.push(report(4, "throughput saturation in IRS density", t, outcome));

    let t = Instant::now();
    let outcome =
        sweep(&with_irs(200.0), SweepParam::Tier(PICO, TierField::Bias), &FIG4_BIAS).and_then(|r| bias_convergence(&r));
    results.push(report(5, "throughput convergence in bias", t, outcome));

    let t = Instant::now();
    results.push(report(
        6,
        "numeric kernel oracles",
        t,
        kernel_oracles(Duration::from_secs(60)),
    ));

    let t = Instant::now();
    results.push(report(7, "property suites", t, property_suites()));

    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
