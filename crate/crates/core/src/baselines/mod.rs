//! Comparison algorithms. All of them reuse the round state, confidence radii
//! and ambiguity index of [`crate::ramgape`] and return the empirical Pareto
//! set at their stopping round.

mod egp;
mod hvi;
mod ra_lucb;
mod round_robin;
mod xi_lcb;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use egp::{empirical_gaps, EgpGap};
pub use hvi::{hypervolume_improvement, HviConfig};

use crate::env::{BanditInstance, RewardSource, RiskParams, SeededEnvironment};
use crate::error::{Error, Result};
use crate::ramgape::{self, Engine, InitRule, NoopObserver, Observer, RunResult, Setting};

/// Which stopping regime an algorithm supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SettingKind {
    FixedBudget,
    FixedConfidence,
}

impl SettingKind {
    pub fn of(setting: &Setting) -> Self {
        if setting.is_fixed_budget() {
            SettingKind::FixedBudget
        } else {
            SettingKind::FixedConfidence
        }
    }
}

impl fmt::Display for SettingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SettingKind::FixedBudget => "fixed-budget",
            SettingKind::FixedConfidence => "fixed-confidence",
        })
    }
}

/// Every algorithm the harness can run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    RamGapE {
        init: InitRule,
    },
    RoundRobin,
    DeRoundRobin,
    LieRoundRobin,
    RaLucb,
    XiLcb,
    /// `None` uses the default reference point for the run's `rho`.
    HviPareto {
        reference: Option<HviConfig>,
    },
    Egp {
        gap: EgpGap,
    },
}

/// Command-line names, each with the settings it accepts.
pub const ALGORITHM_NAMES: [(&str, &str); 9] = [
    ("ramgapeb", "fixed-budget"),
    ("ramgapec", "fixed-confidence"),
    ("rr", "fixed-budget or fixed-confidence"),
    ("de-rr", "fixed-confidence"),
    ("lie-rr", "fixed-budget"),
    ("ra-lucb", "fixed-budget or fixed-confidence"),
    ("xi-lcb", "fixed-budget"),
    ("hvi", "fixed-budget"),
    ("egp", "fixed-budget"),
];

impl Algorithm {
    pub fn supports(&self, kind: SettingKind) -> bool {
        use SettingKind::*;
        match self {
            Algorithm::RamGapE { .. } | Algorithm::RoundRobin | Algorithm::RaLucb => true,
            Algorithm::DeRoundRobin => kind == FixedConfidence,
            Algorithm::LieRoundRobin
            | Algorithm::XiLcb
            | Algorithm::HviPareto { .. }
            | Algorithm::Egp { .. } => kind == FixedBudget,
        }
    }

    /// Name under `kind`; RAMGapE is reported as `ramgapeb` or `ramgapec`.
    pub fn name(&self, kind: SettingKind) -> &'static str {
        match self {
            Algorithm::RamGapE { .. } => match kind {
                SettingKind::FixedBudget => "ramgapeb",
                SettingKind::FixedConfidence => "ramgapec",
            },
            Algorithm::RoundRobin => "rr",
            Algorithm::DeRoundRobin => "de-rr",
            Algorithm::LieRoundRobin => "lie-rr",
            Algorithm::RaLucb => "ra-lucb",
            Algorithm::XiLcb => "xi-lcb",
            Algorithm::HviPareto { .. } => "hvi",
            Algorithm::Egp { .. } => "egp",
        }
    }

    /// Parses a command-line name. The second value is the setting the name
    /// pins, if any (`ramgapeb` and `ramgapec`).
    pub fn parse_name(name: &str) -> Result<(Algorithm, Option<SettingKind>)> {
        let parsed = match name {
            "ramgapeb" => (
                Algorithm::RamGapE {
                    init: InitRule::default(),
                },
                Some(SettingKind::FixedBudget),
            ),
            "ramgapec" => (
                Algorithm::RamGapE {
                    init: InitRule::default(),
                },
                Some(SettingKind::FixedConfidence),
            ),
            "rr" => (Algorithm::RoundRobin, None),
            "de-rr" => (Algorithm::DeRoundRobin, Some(SettingKind::FixedConfidence)),
            "lie-rr" => (Algorithm::LieRoundRobin, Some(SettingKind::FixedBudget)),
            "ra-lucb" => (Algorithm::RaLucb, None),
            "xi-lcb" => (Algorithm::XiLcb, Some(SettingKind::FixedBudget)),
            "hvi" => (
                Algorithm::HviPareto { reference: None },
                Some(SettingKind::FixedBudget),
            ),
            "egp" => (
                Algorithm::Egp {
                    gap: EgpGap::default(),
                },
                Some(SettingKind::FixedBudget),
            ),
            other => {
                let known: Vec<&str> = ALGORITHM_NAMES.iter().map(|(n, _)| *n).collect();
                return Err(Error::config(
                    "algorithm",
                    format!(
                        "unknown algorithm {other:?} (expected one of {})",
                        known.join(", ")
                    ),
                ));
            }
        };
        Ok(parsed)
    }

    /// Rejects a setting the algorithm has no variant for.
    pub fn check_setting(&self, setting: &Setting) -> Result<()> {
        let kind = SettingKind::of(setting);
        if self.supports(kind) {
            Ok(())
        } else {
            Err(Error::config(
                "algorithm",
                format!("{} has no {kind} variant", self.name(kind)),
            ))
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::parse_name(s).map(|(a, _)| a)
    }
}

/// Runs `algorithm` against `source`, reporting every pull to `observer`.
pub fn run_algorithm(
    algorithm: &Algorithm,
    setting: Setting,
    risk: RiskParams,
    source: &mut dyn RewardSource,
    observer: &mut dyn Observer,
) -> Result<RunResult> {
    algorithm.check_setting(&setting)?;
    if let Algorithm::RamGapE { init } = *algorithm {
        return ramgape::run_ramgape(init, setting, risk, source, observer);
    }
    let name = algorithm.name(SettingKind::of(&setting));
    let mut engine = Engine::new(setting, risk, source, observer)?;
    if let Some(reason) = engine.initialize(2) {
        return Ok(engine.finish(name, reason));
    }
    let reason = match *algorithm {
        Algorithm::RoundRobin => round_robin::round_robin(&mut engine)?,
        Algorithm::DeRoundRobin => round_robin::dominated_elimination(&mut engine)?,
        Algorithm::LieRoundRobin => round_robin::least_important_elimination(&mut engine)?,
        Algorithm::RaLucb => ra_lucb::run(&mut engine)?,
        Algorithm::XiLcb => xi_lcb::run(&mut engine),
        Algorithm::HviPareto { reference } => hvi::run(
            &mut engine,
            reference.unwrap_or_else(|| HviConfig::default_for(risk.rho)),
        ),
        Algorithm::Egp { gap } => egp::run(&mut engine, gap)?,
        Algorithm::RamGapE { .. } => unreachable!("dispatched above"),
    };
    Ok(engine.finish(name, reason))
}

fn run_seeded(
    algorithm: Algorithm,
    instance: &BanditInstance,
    setting: Setting,
    seed: u64,
) -> Result<RunResult> {
    let mut env = SeededEnvironment::new(instance, seed);
    run_algorithm(
        &algorithm,
        setting,
        instance.risk(),
        &mut env,
        &mut NoopObserver,
    )
}

pub fn run_round_robin(
    instance: &BanditInstance,
    setting: Setting,
    seed: u64,
) -> Result<RunResult> {
    run_seeded(Algorithm::RoundRobin, instance, setting, seed)
}

pub fn run_de_round_robin(
    instance: &BanditInstance,
    delta: f64,
    eps: f64,
    seed: u64,
    round_cap: Option<u64>,
) -> Result<RunResult> {
    let setting = Setting::FixedConfidence {
        delta,
        eps,
        round_cap,
    };
    run_seeded(Algorithm::DeRoundRobin, instance, setting, seed)
}

pub fn run_lie_round_robin(
    instance: &BanditInstance,
    budget: u64,
    eps: f64,
    a: f64,
    seed: u64,
) -> Result<RunResult> {
    let setting = Setting::FixedBudget { budget, eps, a };
    run_seeded(Algorithm::LieRoundRobin, instance, setting, seed)
}

pub fn run_ra_lucb(instance: &BanditInstance, setting: Setting, seed: u64) -> Result<RunResult> {
    run_seeded(Algorithm::RaLucb, instance, setting, seed)
}

pub fn run_xi_lcb(
    instance: &BanditInstance,
    budget: u64,
    eps: f64,
    a: f64,
    seed: u64,
) -> Result<RunResult> {
    let setting = Setting::FixedBudget { budget, eps, a };
    run_seeded(Algorithm::XiLcb, instance, setting, seed)
}

pub fn run_hvi_pareto(
    instance: &BanditInstance,
    budget: u64,
    eps: f64,
    a: f64,
    reference: HviConfig,
    seed: u64,
) -> Result<RunResult> {
    let setting = Setting::FixedBudget { budget, eps, a };
    run_seeded(
        Algorithm::HviPareto {
            reference: Some(reference),
        },
        instance,
        setting,
        seed,
    )
}

pub fn run_egp(
    instance: &BanditInstance,
    budget: u64,
    eps: f64,
    a: f64,
    seed: u64,
) -> Result<RunResult> {
    let setting = Setting::FixedBudget { budget, eps, a };
    run_seeded(
        Algorithm::Egp {
            gap: EgpGap::default(),
        },
        instance,
        setting,
        seed,
    )
}

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax(values: impl IntoIterator<Item = (usize, f64)>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values {
        if best.is_none_or(|(_, bv)| v > bv) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// Index of the smallest value, lowest index on ties.
pub(crate) fn argmin(values: impl IntoIterator<Item = (usize, f64)>) -> Option<usize> {
    argmax(values.into_iter().map(|(i, v)| (i, -v)))
}

#[cfg(test)]
mod tests;
