//! Property suites over sampled scenarios.

mod common;

use common::props::*;
use irshcn::analytical::signal_gamma;
use irshcn::netmodel::{Scenario, TierConfig, LAMBDA0};
use irshcn::simulator::{sample_ppp, trial_rng, NetworkRealization};
use proptest::prelude::*;

fn tier_strategy() -> impl Strategy<Value = TierConfig> {
    prop::array::uniform6(0.0..1.0f64).prop_map(tier_from_unit)
}

fn scenario_strategy() -> impl Strategy<Value = Scenario> {
    prop::collection::vec(tier_strategy(), 1..=3).prop_map(scenario_with)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn association_sums_to_one(sc in scenario_strategy()) {
        let d = association_defect(&sc);
        prop_assert!(d < 1e-6, "|Σ A_k − 1| = {d}");
    }

    #[test]
    fn serving_distance_pdf_normalized(sc in scenario_strategy()) {
        let d = pdf_mass_defect(&sc);
        prop_assert!(d < 1e-6, "|∫f − 1| = {d}");
    }

    #[test]
    fn gamma_match_is_exact(mean in 1e-15..1e3f64, cv in 0.01..10.0f64) {
        prop_assert!(gamma_match_defect(mean, (cv * mean).powi(2)) < 1e-12);
    }

    #[test]
    fn scattering_moments_match_campbell(d0 in 0.0..50.0f64, lam in 1.0..800.0f64, a in 2.2..4.5f64) {
        let d = scattering_defect(d0, lam, a);
        prop_assert!(d < 1e-9, "{d}");
    }

    #[test]
    fn conditional_coverage_monotone_in_threshold(
        k in 0usize..2, zf in 1.0..8.0f64, d0 in prop::option::of(0.0..50.0f64)
    ) {
        let z = Scenario::reference().tiers[k].height_m * zf;
        let d = coverage_monotonicity_defect(k, z, d0);
        prop_assert!(d <= 1e-9, "coverage rose by {d}");
    }
}

#[test]
fn analytical_scale_invariance() {
    for irs in [0.0, 200.0] {
        let mut base = Scenario::reference();
        base.irs.density_per_m2 = irs * LAMBDA0;
        for db in [-20.0, 17.0] {
            let d = analytical_scale_defect(&base, db);
            assert!(d < 1e-8, "λ_I = {irs}, shift {db} dB: {d}");
        }
    }
}

#[test]
fn simulated_sinr_scale_invariance() {
    let d = simulated_scale_defect(&Scenario::reference(), 13.0, 300, 17);
    assert!(d < 1e-9, "{d}");
}

#[test]
fn simulator_is_deterministic() {
    assert!(simulator_repeats(&Scenario::reference(), 400, 99));
}

#[test]
fn thinning_fraction() {
    let mut sc = Scenario::reference();
    sc.tiers[1].load_factor = 0.3;
    let lin = sc.linearize();
    let mut rng = trial_rng(5, 0);
    let r = NetworkRealization::sample(&lin, 5, 0, &mut rng);
    let n = r.tiers[1].active.len() as f64;
    let on = r.tiers[1].active.iter().filter(|&&a| a).count() as f64;
    let sd = (0.3 * 0.7 / n).sqrt();
    assert!(((on / n) - 0.3).abs() < 3.0 * sd, "{on}/{n}");
}

#[test]
fn ppp_count_and_uniformity() {
    let lam = 1e-3;
    let half = 2000.0;
    let mean = lam * 4.0 * half * half;
    let mut total = 0.0;
    let mut cells = [0.0f64; 16];
    let reps = 1000;
    for t in 0..reps {
        let mut rng = trial_rng(123, t);
        let pts = sample_ppp(lam, half, &mut rng);
        total += pts.len() as f64;
        for p in &pts {
            let i = (((p[0] + half) / (2.0 * half) * 4.0) as usize).min(3);
            let j = (((p[1] + half) / (2.0 * half) * 4.0) as usize).min(3);
            cells[4 * i + j] += 1.0;
        }
    }
    let avg = total / reps as f64;
    assert!(
        (avg - mean).abs() < 3.0 * (mean / reps as f64).sqrt(),
        "{avg} vs {mean}"
    );
    let expect = total / 16.0;
    let chi2: f64 = cells.iter().map(|c| (c - expect).powi(2) / expect).sum();
    // 99th percentile of χ² with 15 degrees of freedom
    assert!(chi2 < 30.578, "χ² = {chi2}");
}

#[test]
fn no_irs_shape_is_one() {
    let lin = Scenario::reference().linearize();
    let g = signal_gamma(&lin, 0, 80.0, None).unwrap();
    assert_eq!(g.shape, 1.0);
}
