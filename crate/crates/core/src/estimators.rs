//! Per-arm running statistics, confidence radii and interval bounds.

use crate::env::RiskParams;
use crate::oracle::ObjectivePoint;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Running estimates for one arm. Only the pull count and the two
/// compensated sums are stored; everything else is derived on read.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmStats {
    pulls: u64,
    sum_x: CompensatedSum,
    sum_x2: CompensatedSum,
}

const VARIANCE_FLOOR: f64 = -1e-12;

impl ArmStats {
    pub fn new() -> Self {
        Self::default()
    }

    /// Folds one reward in.
    ///
    /// # Panics
    ///
    /// If `x` lies outside `[0, 1]`; the environment guarantees the support.
    pub fn update(&mut self, x: f64) {
        assert!((0.0..=1.0).contains(&x), "reward {x} outside [0, 1]");
        self.pulls += 1;
        self.sum_x.add(x);
        self.sum_x2.add(x * x);
    }

    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn sum_x(&self) -> f64 {
        self.sum_x.value()
    }

    pub fn sum_x2(&self) -> f64 {
        self.sum_x2.value()
    }

    /// Empirical mean; 0 before the first pull.
    pub fn mean(&self) -> f64 {
        if self.pulls == 0 {
            0.0
        } else {
            self.sum_x.value() / self.pulls as f64
        }
    }

    /// Empirical second moment; 0 before the first pull.
    pub fn second_moment(&self) -> f64 {
        if self.pulls == 0 {
            0.0
        } else {
            self.sum_x2.value() / self.pulls as f64
        }
    }

    /// Plug-in variance `second_moment - mean^2`, with rounding noise in
    /// `(-1e-12, 0)` floored to zero.
    ///
    /// # Panics
    ///
    /// If the computed variance is below `-1e-12`, which cannot happen for
    /// rewards in `[0, 1]` and signals corrupted state.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let v = self.second_moment() - mean * mean;
        if v >= 0.0 {
            v
        } else if v > VARIANCE_FLOOR {
            0.0
        } else {
            panic!("internal consistency violation: negative empirical variance {v}");
        }
    }

    /// Empirical scaled risk `alpha * (variance - rho * mean)`.
    pub fn risk(&self, params: &RiskParams) -> f64 {
        params.scaled_risk(self.mean(), self.variance())
    }

    pub fn objective_point(&self, params: &RiskParams) -> ObjectivePoint {
        ObjectivePoint::new(self.mean(), self.risk(params))
    }
}

/// Fixed-budget radius `sqrt(a / pulls)`.
pub fn beta_budget(pulls: u64, a: f64) -> f64 {
    assert!(pulls >= 1, "fixed-budget radius needs at least one pull");
    (a / pulls as f64).sqrt()
}

/// Fixed-confidence radius `sqrt((4 / pulls) * ln(8 K (log2 pulls)^2 / delta))`.
pub fn beta_confidence(pulls: u64, num_arms: usize, delta: f64) -> f64 {
    assert!(
        pulls >= 2,
        "fixed-confidence radius needs at least two pulls"
    );
    let n = pulls as f64;
    let log2 = n.log2();
    let inner = 8.0 * num_arms as f64 * log2 * log2 / delta;
    (4.0 / n * inner.ln()).sqrt()
}

/// Which confidence radius an algorithm uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Budget { a: f64 },
    Confidence { num_arms: usize, delta: f64 },
}

impl Radius {
    pub fn beta(&self, pulls: u64) -> f64 {
        match *self {
            Radius::Budget { a } => beta_budget(pulls, a),
            Radius::Confidence { num_arms, delta } => beta_confidence(pulls, num_arms, delta),
        }
    }
}

/// Symmetric, unclipped intervals around the mean and risk estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub mu_up: f64,
    pub mu_lo: f64,
    pub xi_up: f64,
    pub xi_lo: f64,
    pub beta: f64,
}

impl Bounds {
    pub fn new(point: ObjectivePoint, beta: f64) -> Self {
        debug_assert!(beta >= 0.0);
        Self {
            mu_up: point.mu + beta,
            mu_lo: point.mu - beta,
            xi_up: point.xi + beta,
            xi_lo: point.xi - beta,
            beta,
        }
    }

    /// Whether `point` lies strictly inside both intervals.
    pub fn contains(&self, point: ObjectivePoint) -> bool {
        self.mu_lo < point.mu
            && point.mu < self.mu_up
            && self.xi_lo < point.xi
            && point.xi < self.xi_up
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn stats_of(samples: &[f64]) -> ArmStats {
        let mut s = ArmStats::new();
        samples.iter().for_each(|&x| s.update(x));
        s
    }

    #[test]
    fn single_and_two_point_updates() {
        let s = stats_of(&[0.5]);
        assert_eq!(s.pulls(), 1);
        assert_eq!(s.mean(), 0.5);
        assert_eq!(s.second_moment(), 0.25);
        assert_eq!(s.variance(), 0.0);

        let s = stats_of(&[0.0, 1.0]);
        assert_eq!(s.mean(), 0.5);
        assert_eq!(s.second_moment(), 0.5);
        assert_eq!(s.variance(), 0.25);
    }

    #[test]
    fn three_sample_risk() {
        let s = stats_of(&[0.2, 0.4, 0.6]);
        let params = RiskParams::new(0.01).unwrap();
        assert_abs_diff_eq!(s.mean(), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(s.variance(), 0.56 / 3.0 - 0.16, epsilon = 1e-15);
        assert_abs_diff_eq!(s.variance(), 0.026667, epsilon = 1e-6);
        assert_abs_diff_eq!(
            s.risk(&params),
            (0.56 / 3.0 - 0.16 - 0.004) / 3.01,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(s.risk(&params), 0.0075305, epsilon = 1e-7);
    }

    #[test]
    #[should_panic(expected = "outside [0, 1]")]
    fn out_of_support_reward_panics() {
        ArmStats::new().update(1.5);
    }

    #[test]
    fn budget_radius() {
        assert_abs_diff_eq!(beta_budget(100, 0.04), 0.02, epsilon = 1e-15);
        let a = (10_000.0 - 20.0) * 0.01 / 160.0;
        assert_abs_diff_eq!(a, 0.62375, epsilon = 1e-15);
        assert_abs_diff_eq!(beta_budget(2, a), 0.311875f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(beta_budget(2, a), 0.558458, epsilon = 1e-6);
        assert_abs_diff_eq!(
            beta_budget(14, 0.3) / beta_budget(7, 0.3),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn confidence_radius() {
        assert_abs_diff_eq!(
            beta_confidence(4, 10, 0.05),
            6400f64.ln().sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(beta_confidence(4, 10, 0.05), 2.960414, epsilon = 1e-6);
        assert_abs_diff_eq!(
            beta_confidence(2, 10, 0.05),
            (2.0 * 1600f64.ln()).sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(beta_confidence(2, 10, 0.05), 3.841291, epsilon = 1e-6);
    }

    #[test]
    #[should_panic]
    fn confidence_radius_needs_two_pulls() {
        beta_confidence(1, 10, 0.05);
    }

    #[test]
    #[should_panic]
    fn budget_radius_needs_a_pull() {
        beta_budget(0, 0.1);
    }

    #[test]
    fn bounds_are_additive_and_unclipped() {
        let b = Bounds::new(ObjectivePoint::new(0.5, 0.03), 0.02);
        assert_abs_diff_eq!(b.mu_up, 0.52, epsilon = 1e-15);
        assert_abs_diff_eq!(b.mu_lo, 0.48, epsilon = 1e-15);
        assert_abs_diff_eq!(b.xi_up, 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(b.xi_lo, 0.01, epsilon = 1e-15);

        let b = Bounds::new(ObjectivePoint::new(0.5, 0.03), 0.0);
        assert_eq!((b.mu_up, b.mu_lo, b.xi_up, b.xi_lo), (0.5, 0.5, 0.03, 0.03));

        let b = Bounds::new(ObjectivePoint::new(0.1, 0.0), 0.3);
        assert!(b.mu_lo < 0.0);
    }

    #[test]
    fn incremental_matches_batch_after_many_updates() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let samples: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>()).collect();
        let s = stats_of(&samples);
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        assert_abs_diff_eq!(s.mean(), mean, epsilon = 1e-10);
        assert_abs_diff_eq!(s.variance(), var, epsilon = 1e-10);
    }

    proptest! {
        #[test]
        fn confidence_radius_decreasing(pulls in 3u64..1_000_000, k in 2usize..200, delta in 0.001..0.5f64) {
            prop_assert!(beta_confidence(pulls + 1, k, delta) < beta_confidence(pulls, k, delta));
        }

        #[test]
        fn bounds_center_on_estimates(mu in -1.0..1.0f64, xi in -1.0..1.0f64, beta in 0.0..5.0f64) {
            let b = Bounds::new(ObjectivePoint::new(mu, xi), beta);
            prop_assert!(((b.mu_up - b.mu_lo) - 2.0 * beta).abs() < 1e-12);
            prop_assert!(((b.xi_up - b.xi_lo) - 2.0 * beta).abs() < 1e-12);
            prop_assert!(((b.mu_up + b.mu_lo) / 2.0 - mu).abs() < 1e-12);
            prop_assert!(((b.xi_up + b.xi_lo) / 2.0 - xi).abs() < 1e-12);
        }

        #[test]
        fn estimates_stay_in_unit_interval(samples in prop::collection::vec(0.0..=1.0f64, 1..200)) {
            let s = stats_of(&samples);
            prop_assert!((0.0..=1.0).contains(&s.mean()));
            prop_assert!((0.0..=1.0).contains(&s.second_moment()));
            prop_assert!(s.variance() >= 0.0);
        }
    }
}
