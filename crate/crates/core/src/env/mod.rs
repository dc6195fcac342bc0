//! Bandit instances: Beta-distributed arms, their true moments and risk, and
//! seeded reward streams.

mod beta;
mod stream;
mod tables;

pub use beta::sample_beta;
pub use stream::{derive_seed, RewardSource, SeededEnvironment};
pub use tables::{
    load_instance_table, load_table_arms, parse_instance_csv, read_instance_csv, sha256_hex,
    TableId,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::ObjectivePoint;

/// One arm's reward law, `Beta(shape_a, shape_b)` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmSpec {
    shape_a: f64,
    shape_b: f64,
}

/// Closed-form first and second moments of an arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
}

impl ArmSpec {
    pub fn new(shape_a: f64, shape_b: f64) -> Result<Self> {
        if !(shape_a.is_finite() && shape_a > 0.0 && shape_b.is_finite() && shape_b > 0.0) {
            return Err(Error::Data(format!(
                "Beta shapes must be finite and positive, got ({shape_a}, {shape_b})"
            )));
        }
        Ok(Self { shape_a, shape_b })
    }

    /// Solves the Beta shapes that produce the given mean and variance.
    ///
    /// Requires `0 < mean < 1` and `0 < variance < mean * (1 - mean)`.
    pub fn from_moments(mean: f64, variance: f64) -> Result<Self> {
        if !(mean > 0.0 && mean < 1.0) {
            return Err(Error::Data(format!("mean {mean} outside (0, 1)")));
        }
        let limit = mean * (1.0 - mean);
        if !(variance > 0.0 && variance < limit) {
            return Err(Error::Data(format!(
                "variance {variance} infeasible for a Beta law with mean {mean} (needs 0 < v < {limit})"
            )));
        }
        let common = limit / variance - 1.0;
        Self::new(mean * common, (1.0 - mean) * common)
    }

    pub fn shape_a(&self) -> f64 {
        self.shape_a
    }

    pub fn shape_b(&self) -> f64 {
        self.shape_b
    }

    pub fn moments(&self) -> Moments {
        let (a, b) = (self.shape_a, self.shape_b);
        let total = a + b;
        let mean = a / total;
        let variance = a * b / (total * total * (total + 1.0));
        Moments {
            mean,
            second_moment: variance + mean * mean,
            variance,
        }
    }

    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        sample_beta(self.shape_a, self.shape_b, rng)
    }
}

/// Risk weight `rho` and the scaling `alpha` applied to the mean-variance measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskParams {
    pub rho: f64,
    pub alpha: f64,
    /// Set when `alpha` differs from `1 / (3 + rho)`. The confidence radius of
    /// `xi` is then no longer covered by the radius of the moments.
    pub alpha_overridden: bool,
}

impl RiskParams {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::config(
                "rho",
                format!("must be finite and >= 0, got {rho}"),
            ));
        }
        Ok(Self {
            rho,
            alpha: Self::default_alpha(rho),
            alpha_overridden: false,
        })
    }

    pub fn with_alpha(rho: f64, alpha: f64) -> Result<Self> {
        let mut params = Self::new(rho)?;
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::config(
                "alpha",
                format!("must be finite and > 0, got {alpha}"),
            ));
        }
        params.alpha_overridden = alpha != params.alpha;
        params.alpha = alpha;
        Ok(params)
    }

    pub fn default_alpha(rho: f64) -> f64 {
        1.0 / (3.0 + rho)
    }

    /// Mean-variance measure `variance - rho * mean`.
    pub fn mean_variance(&self, mean: f64, variance: f64) -> f64 {
        variance - self.rho * mean
    }

    /// Scaled risk `alpha * (variance - rho * mean)`.
    pub fn scaled_risk(&self, mean: f64, variance: f64) -> f64 {
        self.alpha * self.mean_variance(mean, variance)
    }
}

/// An ordered set of arms together with the risk hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    arms: Vec<ArmSpec>,
    risk: RiskParams,
}

impl BanditInstance {
    pub fn new(arms: Vec<ArmSpec>, risk: RiskParams) -> Result<Self> {
        if arms.len() < 2 {
            return Err(Error::config(
                "instance",
                format!(
                    "a bandit instance needs at least 2 arms, got {}",
                    arms.len()
                ),
            ));
        }
        Ok(Self { arms, risk })
    }

    pub fn with_rho(arms: Vec<ArmSpec>, rho: f64) -> Result<Self> {
        Self::new(arms, RiskParams::new(rho)?)
    }

    pub fn arms(&self) -> &[ArmSpec] {
        &self.arms
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn risk(&self) -> RiskParams {
        self.risk
    }

    /// Ground-truth `(mu, xi)` of arm `index` (zero-based).
    pub fn true_objective_point(&self, index: usize) -> ObjectivePoint {
        let m = self.arms[index].moments();
        ObjectivePoint::new(m.mean, self.risk.scaled_risk(m.mean, m.variance))
    }

    pub fn objective_points(&self) -> Vec<ObjectivePoint> {
        (0..self.arms.len())
            .map(|i| self.true_objective_point(i))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn beta_moments_closed_form() {
        let m = ArmSpec::new(0.08, 0.12).unwrap().moments();
        assert_abs_diff_eq!(m.mean, 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(m.variance, 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(m.second_moment, 0.36, epsilon = 1e-12);

        let m = ArmSpec::new(1.0, 1.0).unwrap().moments();
        assert_abs_diff_eq!(m.mean, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.variance, 1.0 / 12.0, epsilon = 1e-15);

        let m = ArmSpec::new(0.6462, 0.4308).unwrap().moments();
        assert_abs_diff_eq!(m.mean, 0.6, epsilon = 1e-4);
        assert_abs_diff_eq!(m.variance, 0.11556, epsilon = 1e-4);
    }

    #[test]
    fn degenerate_shapes_rejected() {
        assert!(ArmSpec::new(0.0, 1.0).is_err());
        assert!(ArmSpec::new(1.0, -2.0).is_err());
        assert!(ArmSpec::new(f64::NAN, 1.0).is_err());
        assert!(ArmSpec::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn moment_inversion() {
        let arm = ArmSpec::from_moments(0.4, 0.2).unwrap();
        assert_abs_diff_eq!(arm.shape_a(), 0.08, epsilon = 1e-12);
        assert_abs_diff_eq!(arm.shape_b(), 0.12, epsilon = 1e-12);
        assert!(ArmSpec::from_moments(0.5, 0.25).is_err());
        assert!(ArmSpec::from_moments(0.5, 0.0).is_err());
    }

    #[test]
    fn objective_point_scaling() {
        let inst = BanditInstance::with_rho(
            vec![
                ArmSpec::new(0.08, 0.12).unwrap(),
                ArmSpec::new(1.0, 1.0).unwrap(),
            ],
            0.01,
        )
        .unwrap();
        let p = inst.true_objective_point(0);
        assert_abs_diff_eq!(p.mu, 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(p.xi, 0.196 / 3.01, epsilon = 1e-12);
        assert_abs_diff_eq!(p.xi, 0.0651163, epsilon = 1e-7);

        let zero_rho = RiskParams::new(0.0).unwrap();
        assert_abs_diff_eq!(zero_rho.scaled_risk(0.5, 0.09), 0.03, epsilon = 1e-15);

        let cancel = RiskParams::with_alpha(0.5, 7.0).unwrap();
        assert_eq!(cancel.scaled_risk(0.2, 0.1), 0.0);
        assert!(cancel.alpha_overridden);
    }

    #[test]
    fn instance_needs_two_arms() {
        let one = vec![ArmSpec::new(1.0, 1.0).unwrap()];
        assert!(BanditInstance::with_rho(one, 0.01).is_err());
    }
}
