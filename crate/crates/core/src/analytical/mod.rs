//! Closed-form engine.
//!
//! The typical user associates with tier k at 3D distance `z` and, when the
//! local region holds at least one IRS, is beamformed by the nearest one at
//! 2D distance `d0`. Conditioned on `(k, z, d0)` the desired power is
//! moment-matched to a Gamma law and the interference enters through its
//! Laplace transform; the unconditional metrics are adaptive quadratures
//! over `z` and `d0`.

mod association;
mod coverage;
mod interference;
mod signal;

pub use association::{association_probability, irs_distance_pdf, serving_distance_pdf, void_exponent, TierGeometry};
pub use coverage::{
    conditional_coverage, conditional_coverage_detail, coverage_cdf_branch, coverage_derivative_branch,
    overall_coverage, spatial_throughput, throughput_from, CoverageBranch, CoverageBreakdown,
};
pub use interference::{k_sc, laplace_interference, u_derivative, u_function, u_function_complex, InterferenceField};
pub use signal::{signal_gamma, signal_moments, GammaParams};
