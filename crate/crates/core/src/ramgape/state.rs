use crate::env::RiskParams;
use crate::estimators::{ArmStats, Bounds, Radius};
use crate::oracle::{mask_to_indices, pareto_membership, ObjectivePoint};

/// Everything an algorithm knows at a given round: per-arm statistics, the
/// risk parameters and which confidence radius it uses.
///
/// The round counter is the number of samples observed so far, so `T_i(t)`
/// reads as "pulls completed by the end of round t".
#[derive(Debug, Clone)]
pub struct RoundState {
    stats: Vec<ArmStats>,
    risk: RiskParams,
    radius: Radius,
    total: u64,
}

impl RoundState {
    pub fn new(num_arms: usize, risk: RiskParams, radius: Radius) -> Self {
        Self {
            stats: vec![ArmStats::new(); num_arms],
            risk,
            radius,
            total: 0,
        }
    }

    pub fn num_arms(&self) -> usize {
        self.stats.len()
    }

    /// Samples observed so far.
    pub fn total_pulls(&self) -> u64 {
        self.total
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }

    pub fn risk(&self) -> &RiskParams {
        &self.risk
    }

    pub fn radius(&self) -> Radius {
        self.radius
    }

    pub fn pulls(&self, arm: usize) -> u64 {
        self.stats[arm].pulls()
    }

    pub fn pull_counts(&self) -> Vec<u64> {
        self.stats.iter().map(ArmStats::pulls).collect()
    }

    pub fn min_pulls(&self) -> u64 {
        self.stats.iter().map(ArmStats::pulls).min().unwrap_or(0)
    }

    /// Least-pulled arm, lowest index on ties.
    pub fn least_pulled(&self) -> usize {
        let mut best = 0;
        for (i, s) in self.stats.iter().enumerate() {
            if s.pulls() < self.stats[best].pulls() {
                best = i;
            }
        }
        best
    }

    pub fn record(&mut self, arm: usize, reward: f64) {
        self.stats[arm].update(reward);
        self.total += 1;
    }

    pub fn beta(&self, arm: usize) -> f64 {
        self.radius.beta(self.stats[arm].pulls())
    }

    pub fn point(&self, arm: usize) -> ObjectivePoint {
        self.stats[arm].objective_point(&self.risk)
    }

    pub fn points(&self) -> Vec<ObjectivePoint> {
        self.stats
            .iter()
            .map(|s| s.objective_point(&self.risk))
            .collect()
    }

    pub fn bounds(&self, arm: usize) -> Bounds {
        Bounds::new(self.point(arm), self.beta(arm))
    }

    /// Membership mask of the empirical Pareto set.
    pub fn empirical_pareto(&self) -> Vec<bool> {
        pareto_membership(&self.points())
    }

    pub fn empirical_pareto_set(&self) -> Vec<usize> {
        mask_to_indices(&self.empirical_pareto())
    }
}

/// Empirical Pareto set of a list of estimates, ascending indices.
///
/// This is the same dominance filter the oracle applies to true points.
pub fn empirical_pareto(points: &[ObjectivePoint]) -> Vec<usize> {
    mask_to_indices(&pareto_membership(points))
}
