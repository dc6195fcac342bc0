use std::fs;
use std::path::Path;

use serde::Serialize;

use super::run::{ExperimentOutput, PreparedExperiment};
use crate::env::{sha256_hex, RiskParams};
use crate::error::{Error, Result};
use crate::ramgape::{write_trace_csv, Setting};

#[derive(Serialize)]
struct Metadata<'a> {
    experiment_id: &'a str,
    schema_version: u32,
    crate_version: &'static str,
    config: &'a super::ExperimentConfig,
    config_sha256: String,
    data: &'a super::DataProvenance,
    risk: RiskParams,
    setting: Setting,
    aggregation: super::Aggregation,
    checkpoints: usize,
    instances: Vec<InstanceMeta>,
    runs: Vec<RunMeta>,
    files: Vec<String>,
}

#[derive(Serialize)]
struct InstanceMeta {
    instance_id: usize,
    arms: Vec<[f64; 2]>,
    pareto_set: Vec<usize>,
}

#[derive(Serialize)]
struct RunMeta {
    trial_id: u64,
    instance_id: usize,
    trial: u64,
    seed: u64,
}

/// Writes `metadata.json`, `trials.csv`, `regret_series.csv`,
/// `ci_snapshot.csv`, `stopping_pairs.csv` and, for full traces, one CSV per
/// run under `traces/`. Arms are numbered from 1 in every file.
pub fn write_outputs(
    prepared: &PreparedExperiment,
    output: &ExperimentOutput,
    out_dir: &Path,
) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut files = vec![
        "trials.csv".to_owned(),
        "regret_series.csv".to_owned(),
        "ci_snapshot.csv".to_owned(),
        "stopping_pairs.csv".to_owned(),
    ];

    let mut trials = csv_writer();
    trials.write_record([
        "trial_id",
        "algorithm",
        "seed",
        "stop_round",
        "regret_at_stop",
        "pareto_pulls",
        "non_pareto_pulls",
        "instance_id",
        "stop_reason",
    ])?;
    for r in &output.records {
        trials.write_record([
            r.trial_id.to_string(),
            r.algorithm.clone(),
            r.seed.to_string(),
            r.result.stop_round.to_string(),
            r.regret_at_stop.to_string(),
            r.pulls.pareto_pulls.to_string(),
            r.pulls.non_pareto_pulls.to_string(),
            r.instance_id.to_string(),
            serde_json::to_value(r.result.stop_reason)?
                .as_str()
                .unwrap_or_default()
                .to_owned(),
        ])?;
    }
    save(out_dir, "trials.csv", trials)?;

    let mut series = csv_writer();
    series.write_record(["algorithm", "checkpoint", "trimmed_mean_regret"])?;
    for (name, s) in &output.regret_series {
        for (t, v) in s.round_index.iter().zip(&s.value) {
            series.write_record([name.clone(), t.to_string(), v.to_string()])?;
        }
    }
    save(out_dir, "regret_series.csv", series)?;

    let mut ci = csv_writer();
    ci.write_record([
        "trial_id",
        "algorithm",
        "arm",
        "mu_hat",
        "xi_hat",
        "beta",
        "in_set",
    ])?;
    for r in &output.records {
        for row in super::ci_snapshot(&r.result) {
            ci.write_record([
                r.trial_id.to_string(),
                r.algorithm.clone(),
                (row.arm + 1).to_string(),
                row.mu_hat.to_string(),
                row.xi_hat.to_string(),
                row.beta.to_string(),
                row.in_set.to_string(),
            ])?;
        }
    }
    save(out_dir, "ci_snapshot.csv", ci)?;

    let mut pairs = csv_writer();
    pairs.write_record([
        "instance_id",
        "trial",
        "seed",
        "algorithm_a",
        "algorithm_b",
        "stop_a",
        "stop_b",
    ])?;
    for p in &output.stopping_pairs {
        pairs.write_record([
            p.instance_id.to_string(),
            p.trial.to_string(),
            p.seed.to_string(),
            p.algorithm_a.clone(),
            p.algorithm_b.clone(),
            p.stop_a.to_string(),
            p.stop_b.to_string(),
        ])?;
    }
    save(out_dir, "stopping_pairs.csv", pairs)?;

    let traced: Vec<_> = output
        .records
        .iter()
        .filter(|r| r.trace.is_some())
        .collect();
    if !traced.is_empty() {
        let dir = out_dir.join("traces");
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        for r in traced {
            let name = format!("trial{}_{}.csv", r.trial_id, r.algorithm);
            let mut buf = Vec::new();
            write_trace_csv(
                &mut buf,
                r.trace.as_deref().unwrap_or_default(),
                Some(&r.algorithm),
            )?;
            let path = dir.join(&name);
            fs::write(&path, buf).map_err(|e| Error::io(path, e))?;
            files.push(format!("traces/{name}"));
        }
    }

    let config_json = serde_json::to_string(&prepared.config)?;
    let metadata = Metadata {
        experiment_id: &prepared.config.experiment_id,
        schema_version: prepared.config.schema_version,
        crate_version: env!("CARGO_PKG_VERSION"),
        config: &prepared.config,
        config_sha256: sha256_hex(config_json.as_bytes()),
        data: &prepared.provenance,
        risk: prepared.instances[0].risk(),
        setting: prepared.setting,
        aggregation: prepared.aggregation,
        checkpoints: prepared.checkpoints().len(),
        instances: prepared
            .instances
            .iter()
            .zip(&prepared.oracles)
            .enumerate()
            .map(|(instance_id, (inst, oracle))| InstanceMeta {
                instance_id,
                arms: inst
                    .arms()
                    .iter()
                    .map(|a| [a.shape_a(), a.shape_b()])
                    .collect(),
                pareto_set: oracle.profile().pareto().iter().map(|i| i + 1).collect(),
            })
            .collect(),
        runs: (0..prepared.instances.len())
            .flat_map(|i| (0..prepared.config.trials).map(move |t| (i, t)))
            .map(|(instance_id, trial)| RunMeta {
                trial_id: instance_id as u64 * prepared.config.trials + trial,
                instance_id,
                trial,
                seed: prepared.seed(instance_id, trial),
            })
            .collect(),
        files,
    };
    let mut json = serde_json::to_string_pretty(&metadata)?;
    json.push('\n');
    let path = out_dir.join("metadata.json");
    fs::write(&path, json).map_err(|e| Error::io(path, e))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn save(dir: &Path, name: &str, writer: csv::Writer<Vec<u8>>) -> Result<()> {
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv buffer: {e}")))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Error::io(path, e))
}
