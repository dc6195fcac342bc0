use std::path::Path;

use rayon::prelude::*;

use super::config::{Aggregation, ExperimentConfig, TraceDetail};
use super::instances::{load_instances, DataProvenance};
use super::metrics::{
    aggregate_series, pulling_ratio, stopping_time_table, MetricSeries, PullSplit, StoppingPair,
};
use super::output::write_outputs;
use crate::baselines::{run_algorithm, Algorithm, SettingKind};
use crate::env::{derive_seed, BanditInstance, RewardSource, SeededEnvironment};
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::ramgape::{Decision, Observer, RoundState, RunResult, Setting, TraceRecorder, TraceRow};

/// A validated experiment with its instances loaded and its algorithms resolved.
#[derive(Debug, Clone)]
pub struct PreparedExperiment {
    pub config: ExperimentConfig,
    pub instances: Vec<BanditInstance>,
    pub oracles: Vec<Oracle>,
    pub provenance: DataProvenance,
    pub setting: Setting,
    /// Output name and algorithm, in configuration order.
    pub algorithms: Vec<(String, Algorithm)>,
    pub aggregation: Aggregation,
}

/// One algorithm run on one (instance, trial) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    /// `instance_id * trials + trial`; shared by all algorithms of the pair.
    pub trial_id: u64,
    pub instance_id: usize,
    pub trial: u64,
    pub algorithm: String,
    pub seed: u64,
    pub result: RunResult,
    pub regret_at_stop: f64,
    pub pulls: PullSplit,
    /// `(samples, simple regret)` at each checkpoint.
    pub checkpoints: Vec<(u64, f64)>,
    pub trace: Option<Vec<TraceRow>>,
}

/// Everything an experiment produces.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub records: Vec<TrialRecord>,
    /// Fixed-budget regret curves, one per algorithm.
    pub regret_series: Vec<(String, MetricSeries)>,
    /// The first algorithm paired with each of the others.
    pub stopping_pairs: Vec<StoppingPair>,
}

/// Validates `config` (reporting every issue), loads its instances and
/// resolves the setting and algorithms.
pub fn prepare(config: &ExperimentConfig) -> Result<PreparedExperiment> {
    let mut issues = match config.validate() {
        Ok(()) => Vec::new(),
        Err(Error::Config(v)) => v,
        Err(e) => return Err(e),
    };
    // Settings are checked against the arm count, which a CSV source only
    // reveals once loaded; load it anyway so all issues surface together.
    if issues
        .iter()
        .any(|i| i.field.starts_with("instance") || i.field.starts_with("risk"))
    {
        return Err(Error::Config(issues));
    }
    let loaded = load_instances(config)?;
    let k = loaded.instances[0].num_arms();
    if loaded.instances.iter().any(|i| i.num_arms() != k) {
        return Err(Error::Internal("instances differ in arm count".into()));
    }
    let setting = match config.setting.resolve(k) {
        Ok(setting) => setting,
        Err(Error::Config(v)) => {
            for issue in v {
                if !issues.contains(&issue) {
                    issues.push(issue);
                }
            }
            return Err(Error::Config(issues));
        }
        Err(e) => return Err(e),
    };
    if !issues.is_empty() {
        return Err(Error::Config(issues));
    }
    let kind = SettingKind::of(&setting);
    let algorithms = config
        .algorithms
        .iter()
        .map(|entry| {
            Ok((
                entry.name().to_owned(),
                entry.resolve(kind, config.risk.rho)?,
            ))
        })
        .collect::<Result<_>>()?;
    let oracles = loaded
        .instances
        .iter()
        .map(|i| Oracle::new(i.objective_points()))
        .collect();
    Ok(PreparedExperiment {
        config: config.clone(),
        instances: loaded.instances,
        oracles,
        provenance: loaded.provenance,
        setting,
        algorithms,
        aggregation: config.effective_aggregation(),
    })
}

impl PreparedExperiment {
    pub fn num_arms(&self) -> usize {
        self.instances[0].num_arms()
    }

    /// Seed of trial `trial` on instance `instance_id`, common to all algorithms.
    pub fn seed(&self, instance_id: usize, trial: u64) -> u64 {
        derive_seed(self.config.base_seed, &[instance_id as u64, trial])
    }

    /// Samples at which fixed-budget regret is recorded.
    pub fn checkpoints(&self) -> Vec<u64> {
        match self.setting {
            Setting::FixedBudget { budget, .. } => {
                if self.config.trace_detail == TraceDetail::None {
                    return vec![budget];
                }
                let k = self.num_arms() as u64;
                let mut grid: Vec<u64> = (1..=budget / k).map(|i| i * k).collect();
                if budget % k != 0 {
                    grid.push(budget);
                }
                grid
            }
            Setting::FixedConfidence { .. } => Vec::new(),
        }
    }

    /// Runs every (instance, trial, algorithm) triple on up to `parallelism`
    /// threads. Records come back in that nesting order whatever the
    /// scheduling.
    pub fn run_trials(&self, parallelism: usize) -> Result<Vec<TrialRecord>> {
        let trials = self.config.trials;
        let work: Vec<(usize, u64, usize)> = (0..self.instances.len())
            .flat_map(|i| {
                (0..trials).flat_map(move |t| (0..self.algorithms.len()).map(move |a| (i, t, a)))
            })
            .collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism.max(1))
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        let checkpoints = self.checkpoints();
        let results: Vec<Result<TrialRecord>> = pool.install(|| {
            work.par_iter()
                .map(|&(i, t, a)| self.run_one(i, t, a, &checkpoints))
                .collect()
        });
        results.into_iter().collect()
    }

    fn run_one(
        &self,
        instance_id: usize,
        trial: u64,
        alg: usize,
        checkpoints: &[u64],
    ) -> Result<TrialRecord> {
        let (name, algorithm) = &self.algorithms[alg];
        let seed = self.seed(instance_id, trial);
        let instance = &self.instances[instance_id];
        let oracle = &self.oracles[instance_id];
        let mut env = SeededEnvironment::new(instance, seed);
        let mut observer = TrialObserver {
            oracle,
            checkpoints,
            regrets: Vec::with_capacity(checkpoints.len()),
            trace: (self.config.trace_detail == TraceDetail::Full)
                .then(|| TraceRecorder::new(Some(oracle))),
        };
        let result = run_algorithm(
            algorithm,
            self.setting,
            instance.risk(),
            &mut env as &mut dyn RewardSource,
            &mut observer,
        )
        .map_err(|source| Error::Trial {
            algorithm: name.clone(),
            seed,
            source: Box::new(source),
        })?;
        let regret_at_stop = oracle.simple_regret(&result.returned_set);
        Ok(TrialRecord {
            trial_id: instance_id as u64 * self.config.trials + trial,
            instance_id,
            trial,
            algorithm: name.clone(),
            seed,
            pulls: pulling_ratio(&result, oracle.profile()),
            regret_at_stop,
            result,
            checkpoints: observer.regrets,
            trace: observer.trace.map(TraceRecorder::into_rows),
        })
    }

    /// Aggregated regret curve per algorithm (fixed budget only).
    pub fn regret_series(&self, records: &[TrialRecord]) -> Result<Vec<(String, MetricSeries)>> {
        let grid = self.checkpoints();
        if grid.is_empty() {
            return Ok(Vec::new());
        }
        self.algorithms
            .iter()
            .map(|(name, _)| {
                let rows: Vec<Vec<f64>> = records
                    .iter()
                    .filter(|r| &r.algorithm == name)
                    .map(|r| r.checkpoints.iter().map(|&(_, v)| v).collect())
                    .collect();
                Ok((
                    name.clone(),
                    aggregate_series(&rows, &grid, self.aggregation)?,
                ))
            })
            .collect()
    }

    pub fn stopping_pairs(&self, records: &[TrialRecord]) -> Vec<StoppingPair> {
        let Some((first, _)) = self.algorithms.first() else {
            return Vec::new();
        };
        let mut pairs: Vec<StoppingPair> = self
            .algorithms
            .iter()
            .skip(1)
            .flat_map(|(other, _)| stopping_time_table(records, first, other))
            .collect();
        pairs.sort_by_key(|p| (p.instance_id, p.trial));
        pairs
    }

    pub fn execute(&self, parallelism: usize) -> Result<ExperimentOutput> {
        let records = self.run_trials(parallelism)?;
        Ok(ExperimentOutput {
            regret_series: self.regret_series(&records)?,
            stopping_pairs: self.stopping_pairs(&records),
            records,
        })
    }
}

/// Runs an experiment in memory.
pub fn execute(
    config: &ExperimentConfig,
    parallelism: usize,
) -> Result<(PreparedExperiment, ExperimentOutput)> {
    let prepared = prepare(config)?;
    let output = prepared.execute(parallelism)?;
    Ok((prepared, output))
}

/// Runs an experiment and writes its result files into `out_dir`. Output is
/// byte-identical for equal configurations, whatever `parallelism`.
pub fn run_experiment(
    config: &ExperimentConfig,
    out_dir: &Path,
    parallelism: usize,
) -> Result<ExperimentOutput> {
    let (prepared, output) = execute(config, parallelism)?;
    write_outputs(&prepared, &output, out_dir)?;
    Ok(output)
}

/// Scores checkpoints against the oracle and optionally records a trace.
struct TrialObserver<'o> {
    oracle: &'o Oracle,
    checkpoints: &'o [u64],
    regrets: Vec<(u64, f64)>,
    trace: Option<TraceRecorder<'o>>,
}

impl Observer for TrialObserver<'_> {
    fn on_decision(&mut self, state: &RoundState, decision: &Decision) {
        if let Some(trace) = &mut self.trace {
            trace.on_decision(state, decision);
        }
    }

    fn on_sample(&mut self, state: &RoundState, arm: usize) {
        if let Some(trace) = &mut self.trace {
            trace.on_sample(state, arm);
        }
        let t = state.total_pulls();
        let next = self.checkpoints.get(self.regrets.len());
        if next == Some(&t) {
            self.regrets
                .push((t, self.oracle.simple_regret_mask(&state.empirical_pareto())));
        }
    }
}
