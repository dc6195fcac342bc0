//! Risk-averse Pareto-set identification for stochastic multi-armed bandits.
//!
//! Each arm is scored on two objectives: its expected reward `mu` (higher is
//! better) and its scaled mean-variance risk `xi = alpha * (sigma^2 - rho * mu)`
//! (lower is better). The goal is to return an `eps`-Pareto set of arms, either
//! within a fixed sampling budget or with a fixed confidence level.
//!
//! The crate is organised bottom-up:
//!
//! - [`env`]: Beta-distributed arms, ground-truth moments, bundled instance tables
//!   and seeded reward streams.
//! - [`oracle`]: exact dominance, Pareto set, gaps, simple regret and
//!   `eps`-Pareto verification on known objective points.
//! - [`estimators`]: running per-arm statistics and confidence radii.
//! - [`ramgape`]: the gap-based selection rule and its fixed-budget and
//!   fixed-confidence drivers.
//! - [`baselines`]: the comparison algorithms sharing the same machinery.
//! - [`harness`]: declarative multi-trial experiments, metrics and CSV output.

pub mod baselines;
pub mod env;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod oracle;
pub mod ramgape;

pub use error::{ConfigIssue, Error, Result};
