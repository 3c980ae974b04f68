//! Online policies for the two-level ski-rental problem.
//!
//! `K` items can each be rented per unit of demand (cost 1), bought singly
//! (`C_s`), or all bought at once as a combo (`C_c`, with `C_s < C_c < K·C_s`).
//! The crate provides:
//!
//! - [`model`]: prices, demand sequences, cost accounting and feasibility.
//! - [`algorithms`]: the robust threshold policy, its learning-augmented
//!   variant, follow-the-prediction and the single-level baseline.
//! - [`analysis`]: the offline optimum, an exhaustive oracle, closed-form
//!   ratio bounds, per-instance cost bounds and standardization.
//! - [`datagen`]: seeded synthetic workloads, a biased predictor and CSV
//!   trace formats.
//! - [`harness`]: parallel, deterministic sweeps with CSV/JSON output.
//! - [`cli`]: the `tlsr` command line.
//!
//! All money and demand quantities are integers; thresholds and ratios are
//! exact rationals.

pub mod algorithms;
pub mod analysis;
pub mod cli;
pub mod datagen;
pub mod error;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod rational;

pub use algorithms::{Action, Policy, PolicyKind, Prediction, ThresholdSet};
pub use error::{Error, Result};
pub use model::{
    CostBreakdown, DecisionRecord, DemandEvent, DemandSequence, PriceConfig, TotalDemand,
};
pub use rational::{Rational, Threshold};
