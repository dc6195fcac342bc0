//! `ramgape` command-line tool.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::LazyLock;

use clap::{Args, Parser, Subcommand};
use ramgape::baselines::{run_algorithm, Algorithm, SettingKind, ALGORITHM_NAMES};
use ramgape::env::{read_instance_csv, BanditInstance, RiskParams, SeededEnvironment, TableId};
use ramgape::harness::{prepare, run_experiment, ConfigOverrides, ExperimentConfig, TraceDetail};
use ramgape::oracle::Oracle;
use ramgape::ramgape::{recommended_a, write_trace_csv, Setting, TraceRecorder};
use ramgape::{Error, Result};

static ALGORITHM_HELP: LazyLock<String> = LazyLock::new(|| {
    let mut text = String::from("Algorithms:\n");
    for (name, setting) in ALGORITHM_NAMES {
        text.push_str(&format!("  {name:<10} {setting}\n"));
    }
    text.push_str("\nExit codes: 0 success, 1 runtime failure, 2 usage or configuration error.\n");
    text.push_str("RAMGAPE_DATA_DIR overrides the directory of the bundled instance tables.");
    text
});

#[derive(Parser)]
#[command(name = "ramgape", version, about = "Risk-averse Pareto-front identification in bandits", after_help = ALGORITHM_HELP.as_str())]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; results do not depend on it.
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Print the true objective points, Pareto membership and gaps of an instance as CSV.
    Oracle {
        /// Instance CSV path or bundled table id.
        #[arg(long, default_value = "exp3_k10")]
        instance: String,
        #[arg(long, default_value_t = 0.01)]
        rho: f64,
    },
    /// Run one algorithm once and print a summary line.
    #[command(after_help = ALGORITHM_HELP.as_str())]
    Trial {
        /// Algorithm name (see below).
        algorithm: String,
        /// Instance CSV path or bundled table id.
        #[arg(long, default_value = "exp3_k10")]
        instance: String,
        /// Fixed-budget run with this many samples.
        #[arg(long, conflicts_with = "delta")]
        budget: Option<u64>,
        /// Fixed-confidence run with this error probability.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.01)]
        rho: f64,
        /// Fixed-budget exploration parameter; defaults to (n - 2K) eps^2 / (16K).
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        round_cap: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `regret` writes t and regret per sample, `full` every decision.
        #[arg(long, default_value = "none", value_parser = parse_trace)]
        trace: TraceDetail,
        /// Trace CSV destination (required with --trace regret|full).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a config and its instance data without running anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
}

#[derive(Args)]
struct OverrideArgs {
    /// Replaces `base_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces the algorithm list with a single algorithm.
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long, conflicts_with = "delta")]
    budget: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    round_cap: Option<u64>,
    #[arg(long, value_parser = parse_trace)]
    trace: Option<TraceDetail>,
}

impl OverrideArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            base_seed: self.seed,
            algorithm: self.algorithm.clone(),
            budget: self.budget,
            delta: self.delta,
            eps: self.eps,
            rho: self.rho,
            a: self.a,
            round_cap: self.round_cap,
            trace: self.trace,
        }
    }
}

fn parse_trace(s: &str) -> std::result::Result<TraceDetail, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            report(&err);
            ExitCode::from(if err.is_usage() { 2 } else { 1 })
        }
    }
}

/// Machine-readable error report on stderr.
fn report(err: &Error) {
    let mut value = serde_json::json!({
        "error": kind(err),
        "message": err.to_string(),
    });
    if let Some(issues) = err.issues() {
        value["issues"] = serde_json::to_value(issues).unwrap_or_default();
    }
    if let Error::Io { path, .. } = err {
        value["path"] = path.display().to_string().into();
    }
    if let Error::Trial {
        algorithm, seed, ..
    } = err
    {
        value["algorithm"] = algorithm.clone().into();
        value["seed"] = (*seed).into();
    }
    eprintln!("{value}");
}

fn kind(err: &Error) -> &'static str {
    match err {
        Error::Config(_) => "config",
        Error::Data(_) => "data",
        Error::Internal(_) => "internal",
        Error::Trial { .. } => "trial",
        Error::Io { .. } => "io",
        Error::Csv(_) => "csv",
        Error::Json(_) => "json",
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run {
            config,
            out,
            parallelism,
            overrides,
        } => {
            let config = load_config(&config, &overrides)?;
            let output = run_experiment(&config, &out, parallelism)?;
            println!(
                "{}: {} runs written to {}",
                config.experiment_id,
                output.records.len(),
                out.display()
            );
            Ok(())
        }
        Command::Validate { config, overrides } => {
            let config = load_config(&config, &overrides)?;
            let prepared = prepare(&config)?;
            println!(
                "ok: {} ({} instance(s) x {} trial(s) x {} algorithm(s), K = {})",
                config.experiment_id,
                prepared.instances.len(),
                config.trials,
                prepared.algorithms.len(),
                prepared.num_arms()
            );
            Ok(())
        }
        Command::Oracle { instance, rho } => {
            let instance = load_instance(&instance, rho)?;
            let oracle = Oracle::new(instance.objective_points());
            let mut out = std::io::stdout().lock();
            let write = |out: &mut dyn Write, line: String| {
                writeln!(out, "{line}").map_err(|e| Error::io("<stdout>", e))
            };
            write(&mut out, "arm,mu,xi,in_pareto,delta".into())?;
            for (i, p) in oracle.points().iter().enumerate() {
                let profile = oracle.profile();
                write(
                    &mut out,
                    format!(
                        "{},{},{},{},{}",
                        i + 1,
                        p.mu,
                        p.xi,
                        profile.is_pareto(i),
                        profile.delta()[i]
                    ),
                )?;
            }
            Ok(())
        }
        Command::Trial {
            algorithm,
            instance,
            budget,
            delta,
            eps,
            rho,
            a,
            round_cap,
            seed,
            trace,
            out,
        } => {
            let (alg, pinned) = Algorithm::parse_name(&algorithm)?;
            let instance = load_instance(&instance, rho)?;
            let k = instance.num_arms();
            let setting = match (budget, delta) {
                (Some(budget), None) => {
                    if round_cap.is_some() {
                        return Err(Error::config("round_cap", "only used with --delta"));
                    }
                    Setting::FixedBudget {
                        budget,
                        eps,
                        a: a.unwrap_or_else(|| recommended_a(budget, k, eps)),
                    }
                }
                (None, Some(delta)) => {
                    if a.is_some() {
                        return Err(Error::config("a", "only used with --budget"));
                    }
                    Setting::FixedConfidence {
                        delta,
                        eps,
                        round_cap,
                    }
                }
                _ => {
                    return Err(Error::config(
                        "setting",
                        "give exactly one of --budget or --delta",
                    ))
                }
            };
            let kind = SettingKind::of(&setting);
            if pinned.is_some_and(|p| p != kind) {
                return Err(Error::config(
                    "algorithm",
                    format!("{algorithm} has no {kind} variant"),
                ));
            }
            if trace != TraceDetail::None && out.is_none() {
                return Err(Error::config("out", "--trace regret|full needs --out"));
            }
            let oracle = Oracle::new(instance.objective_points());
            let mut recorder = TraceRecorder::new(Some(&oracle));
            let mut env = SeededEnvironment::new(&instance, seed);
            let result = run_algorithm(&alg, setting, instance.risk(), &mut env, &mut recorder)?;
            if let Some(path) = out.filter(|_| trace != TraceDetail::None) {
                write_trial_trace(&path, &recorder, trace)?;
            }
            let set: Vec<String> = result
                .returned_set
                .iter()
                .map(|i| (i + 1).to_string())
                .collect();
            println!(
                "algorithm={} seed={seed} stop_round={} stop_reason={} returned_set=[{}] regret={}",
                result.algorithm,
                result.stop_round,
                serde_json::to_value(result.stop_reason)?
                    .as_str()
                    .unwrap_or_default(),
                set.join(","),
                oracle.simple_regret(&result.returned_set),
            );
            Ok(())
        }
    }
}

fn load_config(path: &Path, overrides: &OverrideArgs) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::load(path)?;
    overrides.overrides().apply(&mut config)?;
    Ok(config)
}

/// A bundled table id or a CSV path.
fn load_instance(spec: &str, rho: f64) -> Result<BanditInstance> {
    let risk = RiskParams::new(rho)?;
    let arms = match spec.parse::<TableId>() {
        Ok(table) => ramgape::env::load_table_arms(table)?.0,
        Err(_) => read_instance_csv(Path::new(spec))?,
    };
    BanditInstance::new(arms, risk)
}

fn write_trial_trace(path: &Path, recorder: &TraceRecorder<'_>, detail: TraceDetail) -> Result<()> {
    let mut buf = Vec::new();
    if detail == TraceDetail::Full {
        write_trace_csv(&mut buf, recorder.rows(), None)?;
    } else {
        buf.extend_from_slice(b"t,regret\n");
        for row in recorder.rows() {
            let regret = row.regret.map(|r| r.to_string()).unwrap_or_default();
            buf.extend_from_slice(format!("{},{regret}\n", row.t).as_bytes());
        }
    }
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}
