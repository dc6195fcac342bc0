use approx::assert_abs_diff_eq;

use super::*;
use crate::baselines::SettingKind;
use crate::error::Error;
use crate::oracle::gaps;
use crate::ramgape::{ArmSummary, RunResult, StopReason};

const EXP3: &str = r#"
schema_version = 1
experiment_id = "small"
trials = 4
base_seed = 11
algorithms = ["ramgapeb", "rr", { name = "hvi", ref_xi = 0.1 }]

[instance]
table = "exp3_k10"

[risk]
rho = 0.01

[setting]
kind = "fixed_budget"
budget = 205
eps = 0.1
"#;

fn exp3() -> ExperimentConfig {
    ExperimentConfig::from_toml_str(EXP3).unwrap()
}

fn fields(err: Error) -> Vec<String> {
    err.issues()
        .expect("config error")
        .iter()
        .map(|i| i.field.clone())
        .collect()
}

#[test]
fn trimmed_mean_examples() {
    assert_eq!(
        aggregate_values(&[4.0, 1.0, 3.0, 2.0], Aggregation::TrimmedMean50).unwrap(),
        2.5
    );
    let eight: Vec<f64> = (1..=8).rev().map(f64::from).collect();
    assert_eq!(
        aggregate_values(&eight, Aggregation::TrimmedMean50).unwrap(),
        4.5
    );
    assert_eq!(
        aggregate_values(&[0.3; 7], Aggregation::TrimmedMean50).unwrap(),
        0.3
    );
    assert!(matches!(
        aggregate_values(&[1.0, 2.0, 3.0], Aggregation::TrimmedMean50),
        Err(Error::Config(_))
    ));
    assert_eq!(
        aggregate_values(&[3.0, 1.0, 2.0], Aggregation::Median).unwrap(),
        2.0
    );
    assert_eq!(
        aggregate_values(&[3.0, 1.0, 2.0, 10.0], Aggregation::Median).unwrap(),
        2.5
    );
    assert_eq!(
        aggregate_values(&[3.0, 1.0], Aggregation::Mean).unwrap(),
        2.0
    );
    // 50 trials: 12 dropped per side, 26 averaged.
    let fifty: Vec<f64> = (0..50).map(f64::from).collect();
    assert_eq!(
        aggregate_values(&fifty, Aggregation::TrimmedMean50).unwrap(),
        (12..38).sum::<i32>() as f64 / 26.0
    );
}

#[test]
fn trimmed_series_is_per_checkpoint() {
    let rows = vec![
        vec![1.0, 0.0],
        vec![2.0, 0.0],
        vec![3.0, 1.0],
        vec![4.0, 1.0],
    ];
    let s = trimmed_mean_regret(&rows, &[10, 20]).unwrap();
    assert_eq!(s.value, vec![2.5, 0.5]);
    assert_eq!(s.round_index, vec![10, 20]);
    assert!(trimmed_mean_regret(&rows, &[10]).is_err());
}

#[test]
fn beta_shape_inversion() {
    let (a, b) = beta_shapes(0.4, 0.2).unwrap();
    assert_abs_diff_eq!(a, 0.08, epsilon = 1e-12);
    assert_abs_diff_eq!(b, 0.12, epsilon = 1e-12);
    assert!(matches!(beta_shapes(0.5, 0.25), Err(Error::Data(_))));
}

#[test]
fn random_instances_stay_in_range_and_are_reproducible() {
    let spec = RandomInstances {
        k: 10,
        mean_range: [0.4, 0.6],
        variance_range: [0.0, 0.2],
        count: 20,
        seed: 5,
    };
    let a = generate_random_instances(&spec).unwrap();
    assert_eq!(a, generate_random_instances(&spec).unwrap());
    assert_eq!(a.len(), 20);
    for arm in a.iter().flatten() {
        let m = arm.moments();
        assert!((0.4..=0.6).contains(&m.mean));
        assert!(m.variance > 0.0 && m.variance <= 0.2 + 1e-12);
    }
}

#[test]
fn pulling_ratio_partitions_pulls() {
    let profile = gaps(&[
        crate::oracle::ObjectivePoint::new(0.6, 0.1),
        crate::oracle::ObjectivePoint::new(0.5, 0.2),
    ]);
    let summary = ArmSummary {
        pulls: 0,
        mu_hat: 0.0,
        xi_hat: 0.0,
        beta: 0.0,
        in_returned_set: false,
    };
    let result = RunResult {
        algorithm: "x".into(),
        returned_set: vec![0],
        stop_round: 30,
        stop_reason: StopReason::Budget,
        pull_counts: vec![20, 10],
        arms: vec![summary; 2],
    };
    let split = pulling_ratio(&result, &profile);
    assert_eq!(
        split,
        PullSplit {
            pareto_pulls: 20,
            non_pareto_pulls: 10
        }
    );
    assert_eq!(
        split.pareto_pulls + split.non_pareto_pulls,
        result.stop_round
    );
    assert_abs_diff_eq!(split.ratio(), 2.0 / 3.0);
}

#[test]
fn config_round_trips_through_toml() {
    let config = exp3();
    config.validate().unwrap();
    let again = ExperimentConfig::from_toml_str(&config.to_toml_string().unwrap()).unwrap();
    assert_eq!(config, again);
    assert_eq!(config.effective_aggregation(), Aggregation::TrimmedMean50);
}

#[test]
fn validation_reports_every_issue() {
    let mut config = exp3();
    config.schema_version = 9;
    config.trials = 0;
    config.instance.csv = Some("x.csv".into());
    config.setting.delta = Some(0.1);
    config.algorithms.push(AlgorithmEntry::Name("de-rr".into()));
    config.algorithms.push(AlgorithmEntry::Name("nope".into()));
    let f = fields(config.validate().unwrap_err());
    for expected in [
        "schema_version",
        "trials",
        "instance",
        "setting.delta",
        "algorithms.de-rr",
        "algorithms.nope",
    ] {
        assert!(
            f.iter().any(|x| x == expected),
            "missing {expected} in {f:?}"
        );
    }
}

#[test]
fn setting_limits_are_checked_against_arm_count() {
    let mut config = exp3();
    config.setting.budget = Some(20);
    assert_eq!(
        fields(config.validate().unwrap_err()),
        vec!["setting.budget"]
    );
}

#[test]
fn trimmed_mean_needs_four_runs() {
    let mut config = exp3();
    config.trials = 3;
    assert_eq!(config.effective_aggregation(), Aggregation::Mean);
    config.aggregation = Some(Aggregation::TrimmedMean50);
    assert_eq!(fields(config.validate().unwrap_err()), vec!["aggregation"]);
}

#[test]
fn overrides_switch_setting() {
    let mut config = exp3();
    let overrides = ConfigOverrides {
        delta: Some(0.05),
        round_cap: Some(10_000),
        algorithm: Some("ramgapec".into()),
        base_seed: Some(3),
        ..Default::default()
    };
    overrides.apply(&mut config).unwrap();
    assert_eq!(config.setting.kind, SettingKind::FixedConfidence);
    assert_eq!(config.setting.budget, None);
    assert_eq!(config.base_seed, 3);
    config.validate().unwrap();
    let both = ConfigOverrides {
        delta: Some(0.1),
        budget: Some(100),
        ..Default::default()
    };
    assert!(both.apply(&mut config).is_err());
}

#[test]
fn fixed_budget_experiment_records() {
    let (prepared, out) = execute(&exp3(), 2).unwrap();
    assert_eq!(out.records.len(), 4 * 3);
    assert_eq!(prepared.checkpoints().len(), 21);
    assert_eq!(*prepared.checkpoints().last().unwrap(), 205);
    for r in &out.records {
        assert_eq!(r.result.stop_round, 205);
        assert_eq!(r.pulls.pareto_pulls + r.pulls.non_pareto_pulls, 205);
        assert_eq!(r.checkpoints.len(), 21);
        assert_eq!(r.checkpoints.last().unwrap().1, r.regret_at_stop);
    }
    // Common random numbers: every algorithm of a trial shares its seed.
    for chunk in out.records.chunks(3) {
        assert!(chunk
            .iter()
            .all(|r| r.seed == chunk[0].seed && r.trial_id == chunk[0].trial_id));
    }
    assert_eq!(out.regret_series.len(), 3);
    assert_eq!(out.stopping_pairs.len(), 8);
}

#[test]
fn single_trial_series_equals_its_trace() {
    let mut config = exp3();
    config.trials = 1;
    let (_, out) = execute(&config, 1).unwrap();
    for (name, series) in &out.regret_series {
        assert_eq!(series.aggregation, Aggregation::Mean);
        let record = out.records.iter().find(|r| &r.algorithm == name).unwrap();
        let values: Vec<f64> = record.checkpoints.iter().map(|c| c.1).collect();
        assert_eq!(series.value, values);
    }
}

#[test]
fn outputs_are_identical_across_parallelism() {
    let mut config = exp3();
    config.trace_detail = TraceDetail::Full;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_experiment(&config, a.path(), 1).unwrap();
    run_experiment(&config, b.path(), 4).unwrap();
    let mut names: Vec<_> = walk(a.path());
    names.sort();
    assert!(names.iter().any(|n| n.starts_with("traces/")));
    assert_eq!(names, {
        let mut n = walk(b.path());
        n.sort();
        n
    });
    for name in names {
        let x = std::fs::read(a.path().join(&name)).unwrap();
        let y = std::fs::read(b.path().join(&name)).unwrap();
        assert_eq!(x, y, "{name} differs");
    }
}

fn walk(dir: &std::path::Path) -> Vec<String> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        let name = entry.file_name().to_string_lossy().into_owned();
        if entry.file_type().unwrap().is_dir() {
            out.extend(
                walk(&entry.path())
                    .into_iter()
                    .map(|n| format!("{name}/{n}")),
            );
        } else {
            out.push(name);
        }
    }
    out
}

#[test]
fn fixed_confidence_random_instances() {
    let text = r#"
schema_version = 1
experiment_id = "fc"
trials = 1
base_seed = 1
algorithms = ["ramgapec", "rr", "de-rr"]

[instance.random]
k = 4
mean_range = [0.1, 0.9]
variance_range = [0.01, 0.02]
count = 3
seed = 8

[risk]
rho = 0.01

[setting]
kind = "fixed_confidence"
delta = 0.1
eps = 0.3
round_cap = 100000
"#;
    let (prepared, out) = execute(&ExperimentConfig::from_toml_str(text).unwrap(), 3).unwrap();
    assert!(prepared.checkpoints().is_empty());
    assert!(out.regret_series.is_empty());
    assert_eq!(out.records.len(), 9);
    assert_eq!(out.stopping_pairs.len(), 6);
    let ids: Vec<u64> = out.records.iter().map(|r| r.trial_id).collect();
    assert_eq!(ids, vec![0, 0, 0, 1, 1, 1, 2, 2, 2]);
}

#[test]
fn unknown_keys_are_rejected() {
    let err = ExperimentConfig::from_toml_str(&format!("{EXP3}\nbogus = 1\n")).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
}
