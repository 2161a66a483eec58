//! Monte Carlo engine.
//!
//! Each trial drops fresh Poisson networks around a user at the origin,
//! associates by maximum biased received power, realizes fading on every
//! path and records the SINR. The serving IRS (nearest one inside the local
//! region) co-phases its elements with the direct path; every other IRS in
//! the region reflects with independent uniform phases.
//!
//! Randomness: one master seed, and trial `t` draws from ChaCha8 stream `t`
//! of that seed, so results do not depend on thread scheduling.

mod estimate;
mod ppp;
mod realization;
mod sample;

pub use estimate::{draw_samples, estimate, estimate_from_samples, trial_rng, wilson_interval, Interval, SimEstimate};
pub use ppp::sample_ppp;
pub use realization::{associate, Association, NetworkRealization, TierPoints};
pub use sample::{simulate_sample, SinrSample};
