use serde::Serialize;

use super::config::Aggregation;
use crate::error::{Error, Result};
use crate::oracle::GapProfile;
use crate::ramgape::RunResult;

/// An aggregated metric over sample-count checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSeries {
    pub round_index: Vec<u64>,
    pub value: Vec<f64>,
    pub aggregation: Aggregation,
}

/// Summarises one checkpoint's values across trials.
pub fn aggregate_values(values: &[f64], aggregation: Aggregation) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::config("aggregation", "no values to aggregate"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    Ok(match aggregation {
        Aggregation::Mean => mean(&sorted),
        Aggregation::Median => {
            let n = sorted.len();
            if n % 2 == 1 {
                sorted[n / 2]
            } else {
                (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
            }
        }
        Aggregation::TrimmedMean50 => {
            if sorted.len() < 4 {
                return Err(Error::config(
                    "aggregation",
                    format!(
                        "trimmed_mean_50 needs at least 4 trials, got {}",
                        sorted.len()
                    ),
                ));
            }
            let cut = sorted.len() / 4;
            mean(&sorted[cut..sorted.len() - cut])
        }
    })
}

/// Aggregates a trials x checkpoints matrix column by column.
pub fn aggregate_series(
    per_trial: &[Vec<f64>],
    round_index: &[u64],
    aggregation: Aggregation,
) -> Result<MetricSeries> {
    if let Some(row) = per_trial.iter().find(|r| r.len() != round_index.len()) {
        return Err(Error::Internal(format!(
            "regret row has {} checkpoints, expected {}",
            row.len(),
            round_index.len()
        )));
    }
    let value = (0..round_index.len())
        .map(|c| {
            let column: Vec<f64> = per_trial.iter().map(|r| r[c]).collect();
            aggregate_values(&column, aggregation)
        })
        .collect::<Result<_>>()?;
    Ok(MetricSeries {
        round_index: round_index.to_vec(),
        value,
        aggregation,
    })
}

/// Middle-50% mean of simple regret at each checkpoint: `floor(trials / 4)`
/// values are dropped from each end.
pub fn trimmed_mean_regret(per_trial: &[Vec<f64>], round_index: &[u64]) -> Result<MetricSeries> {
    aggregate_series(per_trial, round_index, Aggregation::TrimmedMean50)
}

/// Pulls split by true Pareto membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PullSplit {
    pub pareto_pulls: u64,
    pub non_pareto_pulls: u64,
}

impl PullSplit {
    /// Fraction of pulls spent on Pareto-optimal arms.
    pub fn ratio(&self) -> f64 {
        self.pareto_pulls as f64 / (self.pareto_pulls + self.non_pareto_pulls) as f64
    }
}

pub fn pulling_ratio(result: &RunResult, profile: &GapProfile) -> PullSplit {
    let mut split = PullSplit {
        pareto_pulls: 0,
        non_pareto_pulls: 0,
    };
    for (arm, &n) in result.pull_counts.iter().enumerate() {
        if profile.is_pareto(arm) {
            split.pareto_pulls += n;
        } else {
            split.non_pareto_pulls += n;
        }
    }
    split
}

/// One arm of a confidence-interval snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CiRow {
    pub arm: usize,
    pub mu_hat: f64,
    pub xi_hat: f64,
    pub beta: f64,
    pub in_set: bool,
}

/// Final estimates and radii of every arm.
pub fn ci_snapshot(result: &RunResult) -> Vec<CiRow> {
    result
        .arms
        .iter()
        .enumerate()
        .map(|(arm, s)| CiRow {
            arm,
            mu_hat: s.mu_hat,
            xi_hat: s.xi_hat,
            beta: s.beta,
            in_set: s.in_returned_set,
        })
        .collect()
}

/// Stopping rounds of two algorithms on the same instance and seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StoppingPair {
    pub instance_id: usize,
    pub trial: u64,
    pub seed: u64,
    pub algorithm_a: String,
    pub algorithm_b: String,
    pub stop_a: u64,
    pub stop_b: u64,
}

/// Pairs the stopping rounds of `a` and `b` over matching (instance, trial) runs.
pub fn stopping_time_table(records: &[super::TrialRecord], a: &str, b: &str) -> Vec<StoppingPair> {
    records
        .iter()
        .filter(|r| r.algorithm == a)
        .filter_map(|ra| {
            let rb = records.iter().find(|r| {
                r.algorithm == b && r.instance_id == ra.instance_id && r.trial == ra.trial
            })?;
            Some(StoppingPair {
                instance_id: ra.instance_id,
                trial: ra.trial,
                seed: ra.seed,
                algorithm_a: a.to_owned(),
                algorithm_b: b.to_owned(),
                stop_a: ra.result.stop_round,
                stop_b: rb.result.stop_round,
            })
        })
        .collect()
}
