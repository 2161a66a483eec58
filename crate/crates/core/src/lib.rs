//! Downlink coverage and spatial throughput of K-tier heterogeneous cellular
//! networks overlaid with passive intelligent reflecting surfaces (IRSs).
//!
//! Two engines share one scenario description:
//!
//! * [`analytical`]: stochastic-geometry closed forms. Conditional signal
//!   power is moment-matched to a Gamma law, interference is handled through
//!   its Laplace transform, and the outer expectations are adaptive
//!   quadratures.
//! * [`simulator`]: Monte Carlo ground truth over Poisson drops with exact
//!   per-path geometry and fading.
//!
//! [`sweep`] runs parameter sweeps over either engine and writes CSV.

// `!(x > 0.0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytical;
pub mod channel;
pub mod error;
pub mod netmodel;
pub mod quad;
pub mod simulator;
pub mod specialfn;
pub mod sweep;

pub use error::{Error, Result};
pub use netmodel::{EvalConfig, IrsConfig, LinearScenario, Numerics, Scenario, TierConfig};
