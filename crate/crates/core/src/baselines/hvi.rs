//! Hypervolume-improvement sampling.

use serde::{Deserialize, Serialize};

use super::{argmax, argmin};
use crate::oracle::ObjectivePoint;
use crate::ramgape::{Engine, StopReason};

/// Reference point of the hypervolume: a mean below every arm and a risk
/// above every arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HviConfig {
    pub ref_mu: f64,
    pub ref_xi: f64,
}

impl HviConfig {
    /// `(0, 0.25 / (3 + rho))`: the worst mean and the largest possible scaled
    /// variance of a `[0, 1]` reward with the default `alpha`.
    pub fn default_for(rho: f64) -> Self {
        Self {
            ref_mu: 0.0,
            ref_xi: 0.25 / (3.0 + rho),
        }
    }
}

/// `(mu - R_mu) * (R_xi - xi)`.
pub fn hypervolume_improvement(point: ObjectivePoint, reference: HviConfig) -> f64 {
    (point.mu - reference.ref_mu) * (reference.ref_xi - point.xi)
}

/// Each round pulls the empirical Pareto arm with the smallest
/// hypervolume improvement, then the non-Pareto arm with the largest. When
/// every arm looks Pareto optimal, or only one sample is left, the second pull
/// is skipped.
pub(super) fn run(engine: &mut Engine<'_>, reference: HviConfig) -> StopReason {
    loop {
        if let Some(reason) = engine.exhausted() {
            return reason;
        }
        let state = &engine.state;
        let in_pareto = state.empirical_pareto();
        let hvi: Vec<f64> = (0..state.num_arms())
            .map(|i| hypervolume_improvement(state.point(i), reference))
            .collect();
        let inside = argmin(
            (0..hvi.len())
                .filter(|&i| in_pareto[i])
                .map(|i| (i, hvi[i])),
        )
        .expect("empirical Pareto set is never empty");
        let outside = argmax(
            (0..hvi.len())
                .filter(|&i| !in_pareto[i])
                .map(|i| (i, hvi[i])),
        );
        engine.pull(inside, None);
        if let Some(arm) = outside {
            if engine.exhausted().is_none() {
                engine.pull(arm, None);
            }
        }
    }
}
