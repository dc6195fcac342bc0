#![allow(dead_code)]

use std::path::PathBuf;

use ramgape::env::{ArmSpec, BanditInstance};

/// Five arms with means 0.9, 0.7, ..., 0.1 and variance 0.01 under `rho = 10`.
/// Every arm is Pareto optimal and the smallest gap is about 0.154.
pub fn separated_instance() -> BanditInstance {
    let arms = [0.9, 0.7, 0.5, 0.3, 0.1]
        .into_iter()
        .map(|m| ArmSpec::from_moments(m, 0.01).unwrap())
        .collect();
    BanditInstance::with_rho(arms, 10.0).unwrap()
}

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}
