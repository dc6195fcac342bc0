use super::RoundState;
use crate::error::{Error, Result};
use crate::estimators::Bounds;
use crate::oracle::{dominates, pareto_membership, ObjectivePoint};

/// The most ambiguous arm `m_t`, its comparator `p_t` and the index value
/// `V(t) = V_{m_t}(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub most_ambiguous: usize,
    pub comparator: usize,
    pub index: f64,
}

/// Estimates, bounds and empirical Pareto membership frozen at one round.
#[derive(Debug, Clone)]
pub struct IndexSnapshot {
    points: Vec<ObjectivePoint>,
    bounds: Vec<Bounds>,
    in_pareto: Vec<bool>,
}

impl IndexSnapshot {
    pub fn from_state(state: &RoundState) -> Self {
        let points = state.points();
        let betas = (0..state.num_arms())
            .map(|i| state.beta(i))
            .collect::<Vec<_>>();
        Self::from_parts(points, &betas)
    }

    pub fn from_parts(points: Vec<ObjectivePoint>, betas: &[f64]) -> Self {
        assert_eq!(points.len(), betas.len());
        let bounds = points
            .iter()
            .zip(betas)
            .map(|(&p, &b)| Bounds::new(p, b))
            .collect();
        let in_pareto = pareto_membership(&points);
        Self {
            points,
            bounds,
            in_pareto,
        }
    }

    pub fn points(&self) -> &[ObjectivePoint] {
        &self.points
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn in_pareto(&self) -> &[bool] {
        &self.in_pareto
    }

    /// `V_i(t)` together with the arm attaining the inner max (Pareto arm) or
    /// min (dominated arm), lowest index on ties.
    ///
    /// For an empirically Pareto arm this is the largest optimistic margin by
    /// which another arm could still dominate it; for a dominated arm, the
    /// smallest optimistic margin by which its empirical Pareto dominators
    /// could fail to dominate it.
    pub fn ambiguity(&self, i: usize) -> Result<(f64, usize)> {
        let b = &self.bounds;
        let mut best: Option<(f64, usize)> = None;
        if self.in_pareto[i] {
            for j in (0..b.len()).filter(|&j| j != i) {
                let v = (b[j].mu_up - b[i].mu_lo).min(b[i].xi_up - b[j].xi_lo);
                if best.is_none_or(|(bv, _)| v > bv) {
                    best = Some((v, j));
                }
            }
        } else {
            let dominators = (0..b.len())
                .filter(|&j| self.in_pareto[j] && dominates(self.points[j], self.points[i]));
            for j in dominators {
                let v = (b[i].mu_up - b[j].mu_lo).max(b[j].xi_up - b[i].xi_lo);
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, j));
                }
            }
        }
        best.ok_or_else(|| {
            Error::Internal(format!(
                "arm {i} has no comparator (empirically dominated: {})",
                !self.in_pareto[i]
            ))
        })
    }

    /// `V_i(t)` for every arm.
    pub fn ambiguities(&self) -> Result<Vec<f64>> {
        (0..self.points.len())
            .map(|i| self.ambiguity(i).map(|(v, _)| v))
            .collect()
    }

    /// `m_t = argmax_i V_i(t)` (lowest index on ties) and its comparator `p_t`.
    pub fn select(&self) -> Result<Selection> {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..self.points.len() {
            let (v, j) = self.ambiguity(i)?;
            if best.is_none_or(|(bv, _, _)| v > bv) {
                best = Some((v, i, j));
            }
        }
        let (index, most_ambiguous, comparator) =
            best.ok_or_else(|| Error::Internal("selection over zero arms".into()))?;
        Ok(Selection {
            most_ambiguous,
            comparator,
            index,
        })
    }
}

/// `V_i(t)` of a single arm from the current state.
pub fn index_v(state: &RoundState, arm: usize) -> Result<f64> {
    IndexSnapshot::from_state(state)
        .ambiguity(arm)
        .map(|(v, _)| v)
}

/// `(m_t, p_t, V(t))` from the current state.
pub fn select_mt_pt(state: &RoundState) -> Result<Selection> {
    IndexSnapshot::from_state(state).select()
}

/// Between `m_t` and `p_t`, the arm with the larger confidence radius; `m_t`
/// on ties.
pub fn wider_of_pair(state: &RoundState, selection: &Selection) -> usize {
    let (m, p) = (selection.most_ambiguous, selection.comparator);
    if state.beta(p) > state.beta(m) {
        p
    } else {
        m
    }
}
