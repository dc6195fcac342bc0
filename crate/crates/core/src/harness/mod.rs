//! Multi-trial experiment runner: configuration, instance generation, oracle
//! scoring, aggregation and result files.

mod config;
mod instances;
mod metrics;
mod output;
mod run;

pub use config::{
    Aggregation, AlgorithmEntry, AlgorithmParams, ConfigOverrides, ExperimentConfig,
    InstanceConfig, RandomInstances, RiskConfig, SettingConfig, TraceDetail, SCHEMA_VERSION,
};
pub use instances::{
    beta_shapes, generate_random_instances, load_instances, DataProvenance, LoadedInstances,
};
pub use metrics::{
    aggregate_series, aggregate_values, ci_snapshot, pulling_ratio, stopping_time_table,
    trimmed_mean_regret, CiRow, MetricSeries, PullSplit, StoppingPair,
};
pub use output::write_outputs;
pub use run::{
    execute, prepare, run_experiment, ExperimentOutput, PreparedExperiment, TrialRecord,
};

#[cfg(test)]
mod tests;
