//! Empirical-gap Pareto sampling: pull the arm maximising `-gap + beta`.

use serde::{Deserialize, Serialize};

use super::argmax;
use crate::error::Result;
use crate::oracle::ObjectivePoint;
use crate::ramgape::{empirical_pareto, Engine, IndexSnapshot, StopReason};

/// Which empirical gap drives the selection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EgpGap {
    /// For empirically optimal `i`: `max_j min(mu_i - mu_j, xi_j - xi_i)`;
    /// otherwise `min_j max(mu_j - mu_i, xi_i - xi_j)`, both over `j != i`.
    #[default]
    Literal,
    /// The RAMGapE ambiguity index with all radii set to zero.
    ZeroRadiusIndex,
}

/// Empirical gap of every arm under `gap`.
pub fn empirical_gaps(points: &[ObjectivePoint], gap: EgpGap) -> Result<Vec<f64>> {
    match gap {
        EgpGap::ZeroRadiusIndex => {
            IndexSnapshot::from_parts(points.to_vec(), &vec![0.0; points.len()]).ambiguities()
        }
        EgpGap::Literal => {
            let mut in_set = vec![false; points.len()];
            for i in empirical_pareto(points) {
                in_set[i] = true;
            }
            Ok((0..points.len())
                .map(|i| {
                    let p = points[i];
                    let others = (0..points.len()).filter(|&j| j != i).map(|j| points[j]);
                    if in_set[i] {
                        others
                            .map(|q| (p.mu - q.mu).min(q.xi - p.xi))
                            .fold(f64::NEG_INFINITY, f64::max)
                    } else {
                        others
                            .map(|q| (q.mu - p.mu).max(p.xi - q.xi))
                            .fold(f64::INFINITY, f64::min)
                    }
                })
                .collect())
        }
    }
}

pub(super) fn run(engine: &mut Engine<'_>, gap: EgpGap) -> Result<StopReason> {
    loop {
        if let Some(reason) = engine.exhausted() {
            return Ok(reason);
        }
        let state = &engine.state;
        let gaps = empirical_gaps(&state.points(), gap)?;
        let arm = argmax(
            gaps.iter()
                .enumerate()
                .map(|(i, g)| (i, -g + state.beta(i))),
        )
        .expect("at least two arms");
        engine.pull(arm, None);
    }
}
