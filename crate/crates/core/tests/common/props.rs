use std::f64::consts::PI;

use irshcn::analytical::{association_probability, conditional_coverage, overall_coverage, GammaParams, TierGeometry};
use irshcn::channel::{er1, er2, er3, l_irs_to_ue};
use irshcn::netmodel::{LinearScenario, Scenario, TierConfig, LAMBDA0};
use irshcn::quad::{integrate, try_integrate_pieces, Tolerance};
use irshcn::simulator::{draw_samples, estimate};

/// Tier drawn from unit-interval coordinates, kept inside the valid region
/// and above the reference IRS height.
pub fn tier_from_unit(u: [f64; 6]) -> TierConfig {
    TierConfig {
        transmit_power_dbm: 20.0 + 35.0 * u[0],
        height_m: 1.0 + 29.0 * u[1],
        density_per_m2: (1.0 + 99.0 * u[2]) * LAMBDA0,
        pathloss_exponent: 2.5 + 2.5 * u[3],
        bias: 0.2 + 19.8 * u[4],
        load_factor: 0.1 + 0.9 * u[5],
    }
}

pub fn scenario_with(tiers: Vec<TierConfig>) -> Scenario {
    let mut sc = Scenario::reference();
    sc.tiers = tiers;
    sc
}

/// |Σ A_k − 1|.
pub fn association_defect(sc: &Scenario) -> f64 {
    let lin = LinearScenario::new(sc).unwrap();
    let total: f64 = (0..lin.tier_count())
        .map(|k| association_probability(&lin, k).unwrap())
        .sum();
    (total - 1.0).abs()
}

/// Largest |∫ f_k − 1| over tiers that carry users.
pub fn pdf_mass_defect(sc: &Scenario) -> f64 {
    let lin = LinearScenario::new(sc).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..lin.tier_count() {
        let geo = TierGeometry::new(&lin, k).unwrap();
        if geo.association < 1e-6 {
            continue;
        }
        let mass = try_integrate_pieces(
            |z| Ok(geo.pdf(&lin, z)),
            &geo.breakpoints,
            Tolerance::rel(1e-9).with_abs(1e-12),
        )
        .unwrap();
        worst = worst.max((mass - 1.0).abs());
    }
    worst
}

/// Relative mismatch of the fitted Gamma's first two moments.
pub fn gamma_match_defect(mean: f64, var: f64) -> f64 {
    let g = GammaParams::from_moments(mean, var).unwrap();
    (g.mean() / mean - 1.0).abs().max((g.variance() / var - 1.0).abs())
}

/// Relative errors of E_r1, E_r2 against Campbell quadrature and of the
/// identity E_r3 = E_r1² + E_r2.
pub fn scattering_defect(d0: f64, lam_lambda0: f64, alpha: f64) -> f64 {
    let mut irs = Scenario::reference().irs;
    irs.density_per_m2 = lam_lambda0 * LAMBDA0;
    irs.pathloss_exponent = alpha;
    let beta = 1.42e-4;
    let tol = Tolerance::rel(1e-12).with_abs(0.0);
    let f = |d: f64| l_irs_to_ue(d, irs.height_m, alpha, beta);
    let campbell = |g: &dyn Fn(f64) -> f64| {
        2.0 * PI * irs.density_per_m2 * integrate(|d: f64| g(d) * d, d0, irs.local_radius_m, tol).unwrap()
    };
    let m1 = campbell(&|d| f(d));
    let m2 = campbell(&|d| f(d) * f(d));
    let e1 = er1(d0, &irs, beta).unwrap();
    let e2 = er2(d0, &irs, beta).unwrap();
    let e3 = er3(d0, &irs, beta).unwrap();
    let rel = |a: f64, b: f64| if b == 0.0 { a.abs() } else { (a / b - 1.0).abs() };
    rel(e1, m1).max(rel(e2, m2)).max(rel(e3, e1 * e1 + e2))
}

/// Largest increase of conditional coverage over a rising threshold sweep
/// in the reference scenario. Values outside [0, 1] count as 1.
pub fn coverage_monotonicity_defect(k: usize, z: f64, d0: Option<f64>) -> f64 {
    let mut lin = Scenario::reference().linearize();
    let mut prev = 1.0;
    let mut worst: f64 = 0.0;
    for db in (-10..=20).step_by(3) {
        lin.sinr_threshold = 10f64.powf(db as f64 / 10.0);
        let c = conditional_coverage(&lin, k, z, d0).unwrap();
        if !(0.0..=1.0).contains(&c) {
            return 1.0;
        }
        worst = worst.max(c - prev);
        prev = c;
    }
    worst
}

/// The scenario with every transmit power and the noise floor raised by `db`.
pub fn shifted(sc: &Scenario, db: f64) -> Scenario {
    let mut s = sc.clone();
    for t in &mut s.tiers {
        t.transmit_power_dbm += db;
    }
    s.eval.noise_dbm += db;
    s
}

/// Change of association, coverage (absolute) and throughput (relative)
/// when all powers and the noise move together.
pub fn analytical_scale_defect(base: &Scenario, db: f64) -> f64 {
    let a = overall_coverage(&base.linearize()).unwrap();
    let b = overall_coverage(&shifted(base, db).linearize()).unwrap();
    let assoc = a
        .per_tier_association
        .iter()
        .zip(&b.per_tier_association)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let cov = (a.overall_coverage - b.overall_coverage).abs();
    let thr = (a.throughput_bps_hz_per_m2 / b.throughput_bps_hz_per_m2 - 1.0).abs();
    assoc.max(cov).max(thr)
}

/// Largest relative SINR change between simulated drops of the base and
/// shifted scenarios under the same seed. A tier mismatch counts as 1.
pub fn simulated_scale_defect(base: &Scenario, db: f64, trials: usize, seed: u64) -> f64 {
    let a = draw_samples(&base.linearize(), trials, seed).unwrap();
    let b = draw_samples(&shifted(base, db).linearize(), trials, seed).unwrap();
    let mut worst: f64 = 0.0;
    for (x, y) in a.iter().zip(&b) {
        if x.tier != y.tier {
            return 1.0;
        }
        worst = worst.max((x.sinr / y.sinr - 1.0).abs());
    }
    worst
}

pub fn simulator_repeats(sc: &Scenario, trials: usize, seed: u64) -> bool {
    let lin = sc.linearize();
    estimate(&lin, trials, seed).unwrap() == estimate(&lin, trials, seed).unwrap()
}
