use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{Algorithm, EgpGap, HviConfig, SettingKind};
use crate::env::{RiskParams, TableId};
use crate::error::{ConfigIssue, Error, Result};
use crate::ramgape::{recommended_a, InitRule, Setting};

/// Version of the configuration schema understood by this build.
pub const SCHEMA_VERSION: u32 = 1;

/// A complete experiment description, usually read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment_id: String,
    /// Trials per instance.
    pub trials: u64,
    pub base_seed: u64,
    #[serde(default)]
    pub trace_detail: TraceDetail,
    /// Across-trial aggregation of regret curves. Defaults to the trimmed
    /// mean when there are at least four runs per algorithm, else the mean.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregation: Option<Aggregation>,
    pub algorithms: Vec<AlgorithmEntry>,
    pub instance: InstanceConfig,
    pub risk: RiskConfig,
    pub setting: SettingConfig,
}

/// How much per-round detail a run keeps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceDetail {
    /// Regret at the stopping round only.
    None,
    /// Fixed-budget regret every `K` samples.
    #[default]
    Regret,
    /// Additionally one trace CSV per run with every decision.
    Full,
}

impl FromStr for TraceDetail {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(TraceDetail::None),
            "regret" => Ok(TraceDetail::Regret),
            "full" => Ok(TraceDetail::Full),
            other => Err(Error::config(
                "trace_detail",
                format!("expected none, regret or full, got {other:?}"),
            )),
        }
    }
}

/// Across-trial summary of a metric at each checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Mean of the middle half after dropping `floor(n / 4)` values per side.
    TrimmedMean50,
    Mean,
    Median,
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregation::TrimmedMean50 => "trimmed_mean_50",
            Aggregation::Mean => "mean",
            Aggregation::Median => "median",
        })
    }
}

/// An algorithm by name, optionally with parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgorithmEntry {
    Name(String),
    Detailed(AlgorithmParams),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmParams {
    pub name: String,
    /// RAMGapE initialization rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<InitRule>,
    /// HVI reference point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ref_mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ref_xi: Option<f64>,
    /// EGP gap orientation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<EgpGap>,
}

impl AlgorithmEntry {
    pub fn name(&self) -> &str {
        match self {
            AlgorithmEntry::Name(name) => name,
            AlgorithmEntry::Detailed(p) => &p.name,
        }
    }

    /// The algorithm with its parameters, checked against the setting.
    pub fn resolve(&self, kind: SettingKind, rho: f64) -> Result<Algorithm> {
        let field = format!("algorithms.{}", self.name());
        let (mut alg, pinned) = Algorithm::parse_name(self.name())
            .map_err(|_| Error::config(field.clone(), "unknown algorithm"))?;
        let mut issues = Vec::new();
        if let Some(p) = pinned {
            if p != kind {
                issues.push(ConfigIssue::new(
                    &field,
                    format!("requires a {p} setting, configured {kind}"),
                ));
            }
        } else if !alg.supports(kind) {
            issues.push(ConfigIssue::new(&field, format!("has no {kind} variant")));
        }
        if let AlgorithmEntry::Detailed(p) = self {
            match &mut alg {
                Algorithm::RamGapE { init } => *init = p.init.unwrap_or_default(),
                _ if p.init.is_some() => {
                    issues.push(ConfigIssue::new(&field, "init applies to RAMGapE only"))
                }
                _ => {}
            }
            match &mut alg {
                Algorithm::HviPareto { reference } => {
                    if p.ref_mu.is_some() || p.ref_xi.is_some() {
                        let default = HviConfig::default_for(rho);
                        *reference = Some(HviConfig {
                            ref_mu: p.ref_mu.unwrap_or(default.ref_mu),
                            ref_xi: p.ref_xi.unwrap_or(default.ref_xi),
                        });
                    }
                }
                _ if p.ref_mu.is_some() || p.ref_xi.is_some() => {
                    issues.push(ConfigIssue::new(&field, "ref_mu/ref_xi apply to hvi only"))
                }
                _ => {}
            }
            match &mut alg {
                Algorithm::Egp { gap } => *gap = p.gap.unwrap_or_default(),
                _ if p.gap.is_some() => {
                    issues.push(ConfigIssue::new(&field, "gap applies to egp only"))
                }
                _ => {}
            }
        }
        if issues.is_empty() {
            Ok(alg)
        } else {
            Err(Error::Config(issues))
        }
    }
}

/// Where the arms come from. Exactly one field must be set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    /// Bundled table id (`exp3_k10`, `exp4_k100`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    /// Path to an `index,a,b` CSV, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// The same CSV format given inline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inline: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomInstances>,
}

/// Instances whose arm moments are drawn uniformly from a box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomInstances {
    pub k: usize,
    pub mean_range: [f64; 2],
    pub variance_range: [f64; 2],
    #[serde(default = "one")]
    pub count: usize,
    pub seed: u64,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskConfig {
    pub rho: f64,
    /// Overrides `1 / (3 + rho)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

impl RiskConfig {
    pub fn params(&self) -> Result<RiskParams> {
        match self.alpha {
            Some(alpha) => RiskParams::with_alpha(self.rho, alpha),
            None => RiskParams::new(self.rho),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingConfig {
    pub kind: SettingKind,
    pub eps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Defaults to `(n - 2K) eps^2 / (16 K)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_cap: Option<u64>,
}

impl SettingConfig {
    fn shape_issues(&self) -> Vec<ConfigIssue> {
        let mut issues = Vec::new();
        let mut stray = |field: &str, set: bool| {
            if set {
                issues.push(ConfigIssue::new(
                    format!("setting.{field}"),
                    format!("not used by a {} setting", self.kind),
                ));
            }
        };
        match self.kind {
            SettingKind::FixedBudget => {
                stray("delta", self.delta.is_some());
                stray("round_cap", self.round_cap.is_some());
                if self.budget.is_none() {
                    issues.push(ConfigIssue::new(
                        "setting.budget",
                        "required for a fixed-budget setting",
                    ));
                }
            }
            SettingKind::FixedConfidence => {
                stray("budget", self.budget.is_some());
                stray("a", self.a.is_some());
                if self.delta.is_none() {
                    issues.push(ConfigIssue::new(
                        "setting.delta",
                        "required for a fixed-confidence setting",
                    ));
                }
            }
        }
        issues
    }

    /// The concrete setting for `num_arms` arms.
    pub fn resolve(&self, num_arms: usize) -> Result<Setting> {
        let issues = self.shape_issues();
        if !issues.is_empty() {
            return Err(Error::Config(issues));
        }
        let setting = match self.kind {
            SettingKind::FixedBudget => {
                let budget = self.budget.expect("checked above");
                Setting::FixedBudget {
                    budget,
                    eps: self.eps,
                    a: self
                        .a
                        .unwrap_or_else(|| recommended_a(budget, num_arms, self.eps)),
                }
            }
            SettingKind::FixedConfidence => Setting::FixedConfidence {
                delta: self.delta.expect("checked above"),
                eps: self.eps,
                round_cap: self.round_cap,
            },
        };
        match setting.validate(num_arms) {
            Ok(()) => Ok(setting),
            // A defaulted `a` is only invalid because the budget is.
            Err(Error::Config(mut v))
                if self.a.is_none() && v.iter().any(|i| i.field == "budget") =>
            {
                v.retain(|i| i.field != "a");
                Err(prefix_issues(Error::Config(v), "setting."))
            }
            Err(e) => Err(prefix_issues(e, "setting.")),
        }
    }
}

/// Command-line values that replace the corresponding config fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub base_seed: Option<u64>,
    pub algorithm: Option<String>,
    pub budget: Option<u64>,
    pub delta: Option<f64>,
    pub eps: Option<f64>,
    pub rho: Option<f64>,
    pub a: Option<f64>,
    pub round_cap: Option<u64>,
    pub trace: Option<TraceDetail>,
}

impl ConfigOverrides {
    /// Applies the overrides. `budget` switches to a fixed-budget setting and
    /// `delta` to a fixed-confidence one, dropping the other regime's fields.
    pub fn apply(&self, config: &mut ExperimentConfig) -> Result<()> {
        if self.budget.is_some() && self.delta.is_some() {
            return Err(Error::config(
                "budget",
                "--budget and --delta select different settings",
            ));
        }
        let s = &mut config.setting;
        if let Some(budget) = self.budget {
            if s.kind != SettingKind::FixedBudget {
                *s = SettingConfig {
                    kind: SettingKind::FixedBudget,
                    eps: s.eps,
                    budget: None,
                    a: None,
                    delta: None,
                    round_cap: None,
                };
            }
            s.budget = Some(budget);
        }
        if let Some(delta) = self.delta {
            if s.kind != SettingKind::FixedConfidence {
                *s = SettingConfig {
                    kind: SettingKind::FixedConfidence,
                    eps: s.eps,
                    budget: None,
                    a: None,
                    delta: None,
                    round_cap: None,
                };
            }
            s.delta = Some(delta);
        }
        if let Some(eps) = self.eps {
            s.eps = eps;
        }
        if self.a.is_some() {
            s.a = self.a;
        }
        if self.round_cap.is_some() {
            s.round_cap = self.round_cap;
        }
        if let Some(rho) = self.rho {
            config.risk.rho = rho;
        }
        if let Some(seed) = self.base_seed {
            config.base_seed = seed;
        }
        if let Some(trace) = self.trace {
            config.trace_detail = trace;
        }
        if let Some(name) = &self.algorithm {
            config.algorithms = vec![AlgorithmEntry::Name(name.clone())];
        }
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("config", e.message().to_owned()))
    }

    /// Reads a TOML file; a relative `instance.csv` is resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml_str(&text)?;
        if let Some(csv) = &config.instance.csv {
            if csv.is_relative() {
                let base = path.parent().unwrap_or(Path::new(""));
                config.instance.csv = Some(base.join(csv));
            }
        }
        Ok(config)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(format!("config serialization: {e}")))
    }

    /// Number of instances the source yields.
    pub fn instance_count(&self) -> usize {
        self.instance.random.as_ref().map_or(1, |r| r.count)
    }

    /// Aggregation in effect, after defaulting.
    pub fn effective_aggregation(&self) -> Aggregation {
        self.aggregation
            .unwrap_or(if self.runs_per_algorithm() >= 4 {
                Aggregation::TrimmedMean50
            } else {
                Aggregation::Mean
            })
    }

    pub fn runs_per_algorithm(&self) -> u64 {
        self.trials.saturating_mul(self.instance_count() as u64)
    }

    /// Checks everything that can be checked without reading instance files,
    /// reporting all problems at once.
    pub fn validate(&self) -> Result<()> {
        let mut issues = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            issues.push(ConfigIssue::new(
                "schema_version",
                format!(
                    "unsupported version {} (this build reads {SCHEMA_VERSION})",
                    self.schema_version
                ),
            ));
        }
        if self.experiment_id.trim().is_empty() {
            issues.push(ConfigIssue::new("experiment_id", "must not be empty"));
        }
        if self.trials == 0 {
            issues.push(ConfigIssue::new("trials", "must be at least 1"));
        }
        if self.aggregation == Some(Aggregation::TrimmedMean50) && self.runs_per_algorithm() < 4 {
            issues.push(ConfigIssue::new(
                "aggregation",
                "trimmed_mean_50 needs at least 4 runs per algorithm",
            ));
        }
        self.instance.collect_issues(&mut issues);
        absorb(self.risk.params().map(drop), "risk.", &mut issues);
        issues.extend(self.setting.shape_issues());
        if let Some(k) = self.instance.known_arm_count() {
            if issues.iter().all(|i| !i.field.starts_with("setting.")) {
                absorb(self.setting.resolve(k).map(drop), "", &mut issues);
            }
        }
        if self.algorithms.is_empty() {
            issues.push(ConfigIssue::new(
                "algorithms",
                "at least one algorithm is required",
            ));
        }
        let mut seen = Vec::new();
        for entry in &self.algorithms {
            absorb(
                entry.resolve(self.setting.kind, self.risk.rho).map(drop),
                "",
                &mut issues,
            );
            if seen.contains(&entry.name()) {
                issues.push(ConfigIssue::new(
                    format!("algorithms.{}", entry.name()),
                    "listed twice",
                ));
            }
            seen.push(entry.name());
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(issues))
        }
    }
}

impl InstanceConfig {
    fn collect_issues(&self, issues: &mut Vec<ConfigIssue>) {
        let set = [
            self.table.is_some(),
            self.csv.is_some(),
            self.inline.is_some(),
            self.random.is_some(),
        ];
        if set.iter().filter(|&&b| b).count() != 1 {
            issues.push(ConfigIssue::new(
                "instance",
                "set exactly one of table, csv, inline, random",
            ));
        }
        if let Some(table) = &self.table {
            absorb(table.parse::<TableId>().map(drop), "instance.", issues);
        }
        if let Some(r) = &self.random {
            r.collect_issues(issues);
        }
    }

    /// Arm count when it is known without I/O.
    fn known_arm_count(&self) -> Option<usize> {
        if let Some(r) = &self.random {
            return Some(r.k);
        }
        match self.table.as_deref()?.parse::<TableId>().ok()? {
            TableId::Exp3K10 => Some(10),
            TableId::Exp4K100 => Some(100),
        }
    }
}

impl RandomInstances {
    fn collect_issues(&self, issues: &mut Vec<ConfigIssue>) {
        let [m_lo, m_hi] = self.mean_range;
        let [v_lo, v_hi] = self.variance_range;
        if self.k < 2 {
            issues.push(ConfigIssue::new(
                "instance.random.k",
                "needs at least 2 arms",
            ));
        }
        if self.count == 0 {
            issues.push(ConfigIssue::new(
                "instance.random.count",
                "must be at least 1",
            ));
        }
        if !(m_lo > 0.0 && m_lo <= m_hi && m_hi < 1.0) {
            issues.push(ConfigIssue::new(
                "instance.random.mean_range",
                "needs 0 < low <= high < 1",
            ));
        } else if !(v_lo >= 0.0 && v_lo <= v_hi && v_hi > 0.0) {
            issues.push(ConfigIssue::new(
                "instance.random.variance_range",
                "needs 0 <= low <= high, high > 0",
            ));
        } else {
            // mu (1 - mu) is largest at the point of the mean range closest to 1/2.
            let best = 0.5_f64.clamp(m_lo, m_hi);
            if v_lo >= best * (1.0 - best) {
                issues.push(ConfigIssue::new(
                    "instance.random.variance_range",
                    "no variance in range is feasible for a Beta law with a mean in range",
                ));
            }
        }
    }
}

fn absorb(result: Result<()>, prefix: &str, issues: &mut Vec<ConfigIssue>) {
    if let Err(e) = result {
        match prefix_issues(e, prefix) {
            Error::Config(v) => issues.extend(v),
            other => issues.push(ConfigIssue::new(
                prefix.trim_end_matches('.'),
                other.to_string(),
            )),
        }
    }
}

fn prefix_issues(e: Error, prefix: &str) -> Error {
    match e {
        Error::Config(v) => Error::Config(
            v.into_iter()
                .map(|i| {
                    if i.field.starts_with(prefix) {
                        i
                    } else {
                        ConfigIssue::new(format!("{prefix}{}", i.field), i.message)
                    }
                })
                .collect(),
        ),
        other => other,
    }
}
