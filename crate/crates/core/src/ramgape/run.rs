use serde::Serialize;

use super::index::{wider_of_pair, IndexSnapshot, Selection};
use super::setting::{InitRule, Setting};
use super::RoundState;
use crate::env::{BanditInstance, RewardSource, RiskParams, SeededEnvironment};
use crate::error::Result;

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Fixed budget spent.
    Budget,
    /// Fixed-confidence stopping rule satisfied.
    Rule,
    /// Fixed-confidence run hit its round cap first.
    RoundCap,
}

/// The arm about to be pulled and, for index-driven rounds, the selection that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub arm: usize,
    pub selection: Option<Selection>,
}

/// Hook into a running algorithm. Observers see the estimates only, never the
/// environment's true parameters; scoring against ground truth is the
/// observer's business.
pub trait Observer {
    /// Before each pull, with the state the decision was made on.
    fn on_decision(&mut self, _state: &RoundState, _decision: &Decision) {}

    /// After each sample has been folded into the state.
    fn on_sample(&mut self, _state: &RoundState, _arm: usize) {}
}

/// Observer that ignores everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoopObserver;

impl Observer for NoopObserver {}

/// Final per-arm estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArmSummary {
    pub pulls: u64,
    pub mu_hat: f64,
    pub xi_hat: f64,
    pub beta: f64,
    pub in_returned_set: bool,
}

/// Outcome of one algorithm run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub algorithm: String,
    /// Empirical Pareto set at the stopping round.
    pub returned_set: Vec<usize>,
    pub stop_round: u64,
    pub stop_reason: StopReason,
    pub pull_counts: Vec<u64>,
    pub arms: Vec<ArmSummary>,
}

/// Shared plumbing for every algorithm: owns the state, draws samples and
/// notifies the observer.
pub(crate) struct Engine<'a> {
    pub(crate) state: RoundState,
    pub(crate) setting: Setting,
    source: &'a mut dyn RewardSource,
    observer: &'a mut dyn Observer,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(
        setting: Setting,
        risk: RiskParams,
        source: &'a mut dyn RewardSource,
        observer: &'a mut dyn Observer,
    ) -> Result<Self> {
        let k = source.num_arms();
        setting.validate(k)?;
        Ok(Self {
            state: RoundState::new(k, risk, setting.radius(k)),
            setting,
            source,
            observer,
        })
    }

    pub(crate) fn num_arms(&self) -> usize {
        self.state.num_arms()
    }

    pub(crate) fn pull(&mut self, arm: usize, selection: Option<Selection>) {
        self.observer
            .on_decision(&self.state, &Decision { arm, selection });
        let reward = self.source.pull(arm);
        self.state.record(arm, reward);
        self.observer.on_sample(&self.state, arm);
    }

    /// Samples still allowed before the budget or round cap, if bounded.
    pub(crate) fn remaining(&self) -> Option<u64> {
        self.setting
            .sample_limit()
            .map(|limit| limit.saturating_sub(self.state.total_pulls()))
    }

    /// Budget or round cap reached.
    pub(crate) fn exhausted(&self) -> Option<StopReason> {
        match self.remaining() {
            Some(0) if self.setting.is_fixed_budget() => Some(StopReason::Budget),
            Some(0) => Some(StopReason::RoundCap),
            _ => None,
        }
    }

    /// Fixed-confidence stopping test on an index value.
    pub(crate) fn rule_met(&self, index: f64) -> bool {
        match self.setting {
            Setting::FixedConfidence { eps, .. } => index < eps,
            Setting::FixedBudget { .. } => false,
        }
    }

    /// Pulls the least-pulled arm until every arm has `per_arm` samples.
    pub(crate) fn initialize(&mut self, per_arm: u64) -> Option<StopReason> {
        while self.state.min_pulls() < per_arm {
            if let Some(reason) = self.exhausted() {
                return Some(reason);
            }
            let arm = self.state.least_pulled();
            self.pull(arm, None);
        }
        None
    }

    pub(crate) fn finish(self, algorithm: &str, stop_reason: StopReason) -> RunResult {
        let state = &self.state;
        let in_set = state.empirical_pareto();
        let arms = (0..state.num_arms())
            .map(|i| {
                let stats = &state.stats()[i];
                ArmSummary {
                    pulls: stats.pulls(),
                    mu_hat: stats.mean(),
                    xi_hat: stats.risk(state.risk()),
                    beta: if stats.pulls() >= min_pulls_for_radius(&self.setting) {
                        state.beta(i)
                    } else {
                        f64::INFINITY
                    },
                    in_returned_set: in_set[i],
                }
            })
            .collect();
        RunResult {
            algorithm: algorithm.to_owned(),
            returned_set: state.empirical_pareto_set(),
            stop_round: state.total_pulls(),
            stop_reason,
            pull_counts: state.pull_counts(),
            arms,
        }
    }
}

fn min_pulls_for_radius(setting: &Setting) -> u64 {
    if setting.is_fixed_budget() {
        1
    } else {
        2
    }
}

/// Arm chosen by the RAMGapE selection rule.
///
/// While some arm has fewer than the initialization pulls, returns the
/// least-pulled arm. Otherwise returns whichever of `m_t` and `p_t` has the
/// wider confidence radius, preferring `m_t` on ties.
pub fn pull_arm(state: &RoundState, init: InitRule) -> crate::error::Result<usize> {
    if state.min_pulls() < init.pulls_per_arm() {
        return Ok(state.least_pulled());
    }
    let selection = IndexSnapshot::from_state(state).select()?;
    Ok(wider_of_pair(state, &selection))
}

/// Display name for RAMGapE under a setting.
pub fn ramgape_name(setting: &Setting) -> &'static str {
    if setting.is_fixed_budget() {
        "ramgapeb"
    } else {
        "ramgapec"
    }
}

/// Runs RAMGapE under either setting.
pub fn run_ramgape(
    init: InitRule,
    setting: Setting,
    risk: RiskParams,
    source: &mut dyn RewardSource,
    observer: &mut dyn Observer,
) -> Result<RunResult> {
    let mut engine = Engine::new(setting, risk, source, observer)?;
    let name = ramgape_name(&setting);
    if let Some(reason) = engine.initialize(init.pulls_per_arm()) {
        return Ok(engine.finish(name, reason));
    }
    let reason = loop {
        if setting.is_fixed_budget() {
            if let Some(reason) = engine.exhausted() {
                break reason;
            }
        }
        let selection = IndexSnapshot::from_state(&engine.state).select()?;
        if engine.rule_met(selection.index) {
            break StopReason::Rule;
        }
        if let Some(reason) = engine.exhausted() {
            break reason;
        }
        let arm = wider_of_pair(&engine.state, &selection);
        engine.pull(arm, Some(selection));
    };
    Ok(engine.finish(name, reason))
}

/// RAMGapE with a fixed budget of `budget` pulls on a seeded environment.
pub fn run_fixed_budget(
    instance: &BanditInstance,
    budget: u64,
    eps: f64,
    a: f64,
    seed: u64,
) -> Result<RunResult> {
    let mut env = SeededEnvironment::new(instance, seed);
    let setting = Setting::FixedBudget { budget, eps, a };
    run_ramgape(
        InitRule::default(),
        setting,
        instance.risk(),
        &mut env,
        &mut NoopObserver,
    )
}

/// RAMGapE with fixed confidence `delta` and tolerance `eps` on a seeded
/// environment.
pub fn run_fixed_confidence(
    instance: &BanditInstance,
    delta: f64,
    eps: f64,
    seed: u64,
    round_cap: Option<u64>,
) -> Result<RunResult> {
    let mut env = SeededEnvironment::new(instance, seed);
    let setting = Setting::FixedConfidence {
        delta,
        eps,
        round_cap,
    };
    run_ramgape(
        InitRule::default(),
        setting,
        instance.risk(),
        &mut env,
        &mut NoopObserver,
    )
}
