//! Exact ground truth on known objective points.
//!
//! Everything here works on `(mu, xi)` pairs: higher `mu` is better, lower `xi`
//! is better, and dominance is strict in both coordinates.

use serde::{Deserialize, Serialize};

/// Expected reward and scaled risk of one arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectivePoint {
    pub mu: f64,
    pub xi: f64,
}

impl ObjectivePoint {
    pub fn new(mu: f64, xi: f64) -> Self {
        Self { mu, xi }
    }
}

/// `p` strictly dominates `q`: strictly higher mean and strictly lower risk.
pub fn dominates(p: ObjectivePoint, q: ObjectivePoint) -> bool {
    p.mu > q.mu && p.xi < q.xi
}

/// Membership mask of the non-dominated points.
pub fn pareto_membership(points: &[ObjectivePoint]) -> Vec<bool> {
    points
        .iter()
        .map(|&q| !points.iter().any(|&p| dominates(p, q)))
        .collect()
}

/// Indices of the non-dominated points, ascending.
pub fn pareto_set(points: &[ObjectivePoint]) -> Vec<usize> {
    mask_to_indices(&pareto_membership(points))
}

/// `m(i, j) = min(mu_j - mu_i, xi_i - xi_j)`: the margin by which `j`
/// dominates `i` (positive iff `j` strictly dominates `i`).
pub fn dominance_margin(i: usize, j: usize, points: &[ObjectivePoint]) -> f64 {
    assert_ne!(i, j, "dominance margin of an arm against itself");
    (points[j].mu - points[i].mu).min(points[i].xi - points[j].xi)
}

/// `M(i, j) = max(mu_i - mu_j, xi_j - xi_i)`: how far `i` is from being
/// dominated by `j` (positive iff `j` does not weakly dominate `i`).
pub fn separation(i: usize, j: usize, points: &[ObjectivePoint]) -> f64 {
    assert_ne!(i, j, "separation of an arm from itself");
    (points[i].mu - points[j].mu).max(points[j].xi - points[i].xi)
}

/// True Pareto set and per-arm gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    in_pareto: Vec<bool>,
    delta: Vec<f64>,
}

impl GapProfile {
    pub fn pareto(&self) -> Vec<usize> {
        mask_to_indices(&self.in_pareto)
    }

    pub fn in_pareto(&self) -> &[bool] {
        &self.in_pareto
    }

    pub fn is_pareto(&self, arm: usize) -> bool {
        self.in_pareto[arm]
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    /// `r_S`: the largest gap among arms that `set` misclassifies; 0 when
    /// nothing is misclassified.
    pub fn simple_regret(&self, set: &[usize]) -> f64 {
        self.simple_regret_mask(&indices_to_mask(set, self.delta.len()))
    }

    /// [`GapProfile::simple_regret`] for a membership mask.
    pub fn simple_regret_mask(&self, mask: &[bool]) -> f64 {
        debug_assert_eq!(mask.len(), self.delta.len());
        mask.iter()
            .zip(&self.in_pareto)
            .zip(&self.delta)
            .filter(|((s, p), _)| s != p)
            .map(|(_, &d)| d)
            .fold(0.0, f64::max)
    }
}

/// Gap of every arm.
///
/// A dominated arm's gap is its largest dominance margin against a Pareto arm.
/// A Pareto arm's gap is the smaller of its closest confusion with another
/// Pareto arm, `min(M(i, j), M(j, i))`, and `M(j, i)^+ + gap_j` over the
/// dominated arms `j`. An empty minimum counts as `+inf`.
pub fn gaps(points: &[ObjectivePoint]) -> GapProfile {
    let k = points.len();
    let in_pareto = pareto_membership(points);
    let mut delta = vec![0.0; k];

    for i in (0..k).filter(|&i| !in_pareto[i]) {
        delta[i] = (0..k)
            .filter(|&j| in_pareto[j] && dominates(points[j], points[i]))
            .map(|j| dominance_margin(i, j, points))
            .fold(f64::NEG_INFINITY, f64::max);
    }
    for i in (0..k).filter(|&i| in_pareto[i]) {
        let among_pareto = (0..k)
            .filter(|&j| j != i && in_pareto[j])
            .map(|j| separation(i, j, points).min(separation(j, i, points)))
            .fold(f64::INFINITY, f64::min);
        let against_dominated = (0..k)
            .filter(|&j| !in_pareto[j])
            .map(|j| separation(j, i, points).max(0.0) + delta[j])
            .fold(f64::INFINITY, f64::min);
        delta[i] = among_pareto.min(against_dominated);
    }
    GapProfile { in_pareto, delta }
}

pub fn simple_regret(set: &[usize], points: &[ObjectivePoint]) -> f64 {
    gaps(points).simple_regret(set)
}

/// Checks both `eps`-Pareto conditions: no member is beaten by `eps` in both
/// objectives, and every non-member is.
pub fn is_eps_pareto(set: &[usize], points: &[ObjectivePoint], eps: f64) -> bool {
    assert!(eps > 0.0, "eps must be positive");
    let mask = indices_to_mask(set, points.len());
    let beaten_by_eps = |i: usize, j: usize| {
        points[i].mu <= points[j].mu - eps && points[i].xi >= points[j].xi + eps
    };
    (0..points.len()).all(|i| {
        if mask[i] {
            (0..points.len()).all(|j| !beaten_by_eps(i, j))
        } else {
            (0..points.len()).any(|j| beaten_by_eps(i, j))
        }
    })
}

/// Ground truth for one instance with the gap profile computed once.
#[derive(Debug, Clone)]
pub struct Oracle {
    points: Vec<ObjectivePoint>,
    profile: GapProfile,
}

impl Oracle {
    pub fn new(points: Vec<ObjectivePoint>) -> Self {
        let profile = gaps(&points);
        Self { points, profile }
    }

    pub fn points(&self) -> &[ObjectivePoint] {
        &self.points
    }

    pub fn profile(&self) -> &GapProfile {
        &self.profile
    }

    pub fn simple_regret(&self, set: &[usize]) -> f64 {
        self.profile.simple_regret(set)
    }

    pub fn simple_regret_mask(&self, mask: &[bool]) -> f64 {
        self.profile.simple_regret_mask(mask)
    }

    pub fn is_eps_pareto(&self, set: &[usize], eps: f64) -> bool {
        is_eps_pareto(set, &self.points, eps)
    }
}

pub(crate) fn mask_to_indices(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &m)| m.then_some(i))
        .collect()
}

pub(crate) fn indices_to_mask(set: &[usize], len: usize) -> Vec<bool> {
    let mut mask = vec![false; len];
    for &i in set {
        mask[i] = true;
    }
    mask
}
