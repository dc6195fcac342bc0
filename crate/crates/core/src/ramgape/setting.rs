use serde::{Deserialize, Serialize};

use crate::error::{ConfigIssue, Error, Result};
use crate::estimators::Radius;

/// Stopping regime of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Setting {
    /// Exactly `budget` pulls, radius `sqrt(a / T_i)`. `eps` only scores the result.
    FixedBudget { budget: u64, eps: f64, a: f64 },
    /// Stop once the index drops below `eps`; radius from `delta`. A missing
    /// `round_cap` means no cap, which requires `eps > 0`.
    FixedConfidence {
        delta: f64,
        eps: f64,
        round_cap: Option<u64>,
    },
}

impl Setting {
    /// Fixed-budget setting with `a = (n - 2K) eps^2 / (16 K)`.
    pub fn fixed_budget(budget: u64, eps: f64, num_arms: usize) -> Self {
        Setting::FixedBudget {
            budget,
            eps,
            a: recommended_a(budget, num_arms, eps),
        }
    }

    pub fn eps(&self) -> f64 {
        match *self {
            Setting::FixedBudget { eps, .. } | Setting::FixedConfidence { eps, .. } => eps,
        }
    }

    pub fn is_fixed_budget(&self) -> bool {
        matches!(self, Setting::FixedBudget { .. })
    }

    pub fn radius(&self, num_arms: usize) -> Radius {
        match *self {
            Setting::FixedBudget { a, .. } => Radius::Budget { a },
            Setting::FixedConfidence { delta, .. } => Radius::Confidence { num_arms, delta },
        }
    }

    /// Most samples a run may draw, if bounded.
    pub fn sample_limit(&self) -> Option<u64> {
        match *self {
            Setting::FixedBudget { budget, .. } => Some(budget),
            Setting::FixedConfidence { round_cap, .. } => round_cap,
        }
    }

    pub fn validate(&self, num_arms: usize) -> Result<()> {
        let mut issues = Vec::new();
        let init = (num_arms as u64).saturating_mul(2);
        match *self {
            Setting::FixedBudget { budget, eps, a } => {
                if budget <= init {
                    issues.push(ConfigIssue::new(
                        "budget",
                        format!(
                            "must exceed 2K = {init} so initialization completes, got {budget}"
                        ),
                    ));
                }
                if !(eps.is_finite() && eps > 0.0) {
                    issues.push(ConfigIssue::new(
                        "eps",
                        format!("must be finite and > 0, got {eps}"),
                    ));
                }
                if !(a.is_finite() && a > 0.0) {
                    issues.push(ConfigIssue::new(
                        "a",
                        format!("must be finite and > 0, got {a}"),
                    ));
                }
            }
            Setting::FixedConfidence {
                delta,
                eps,
                round_cap,
            } => {
                if !(delta > 0.0 && delta < 1.0) {
                    issues.push(ConfigIssue::new(
                        "delta",
                        format!("must lie in (0, 1), got {delta}"),
                    ));
                }
                if !(eps.is_finite() && eps >= 0.0) {
                    issues.push(ConfigIssue::new(
                        "eps",
                        format!("must be finite and >= 0, got {eps}"),
                    ));
                }
                match round_cap {
                    None if eps == 0.0 => issues.push(ConfigIssue::new(
                        "round_cap",
                        "eps = 0 never satisfies the stopping rule; a finite round cap is required",
                    )),
                    Some(cap) if cap <= init => issues.push(ConfigIssue::new(
                        "round_cap",
                        format!("must exceed 2K = {init}, got {cap}"),
                    )),
                    _ => {}
                }
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(issues))
        }
    }
}

/// `a = (n - 2K) eps^2 / (16 K)`, the largest `a` for which the fixed-budget
/// regret guarantee applies.
pub fn recommended_a(budget: u64, num_arms: usize, eps: f64) -> f64 {
    (budget as f64 - 2.0 * num_arms as f64) * eps * eps / (16.0 * num_arms as f64)
}

/// How many pulls every arm receives before adaptive selection starts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitRule {
    /// Two pulls per arm; adaptive rounds start at `t = 2K`.
    #[default]
    TwoPulls,
    /// Three pulls per arm, the literal `T_i(t) <= 2` test of the selection
    /// routine. Kept for ablations.
    ThreePulls,
}

impl InitRule {
    pub fn pulls_per_arm(self) -> u64 {
        match self {
            InitRule::TwoPulls => 2,
            InitRule::ThreePulls => 3,
        }
    }
}
