use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{ExperimentConfig, RandomInstances};
use crate::env::{
    load_table_arms, parse_instance_csv, read_instance_csv, sha256_hex, ArmSpec, BanditInstance,
    TableId,
};
use crate::error::{Error, Result};

/// Where a run's arms came from, for the metadata record.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataProvenance {
    Table { id: String, sha256: String },
    Csv { path: String, sha256: String },
    Inline { sha256: String },
    Random { seed: u64 },
}

/// Solves Beta shapes from `(mean, variance)`:
/// `a = mean * c`, `b = (1 - mean) * c` with `c = mean (1 - mean) / variance - 1`.
pub fn beta_shapes(mean: f64, variance: f64) -> Result<(f64, f64)> {
    let arm = ArmSpec::from_moments(mean, variance)?;
    Ok((arm.shape_a(), arm.shape_b()))
}

const MAX_REJECTIONS: usize = 100_000;

/// Draws `spec.count` instances, each with `spec.k` arms whose `(mean,
/// variance)` is uniform on the feasible part of the configured box.
pub fn generate_random_instances(spec: &RandomInstances) -> Result<Vec<Vec<ArmSpec>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let [m_lo, m_hi] = spec.mean_range;
    let [v_lo, v_hi] = spec.variance_range;
    (0..spec.count)
        .map(|_| {
            (0..spec.k)
                .map(|_| {
                    for _ in 0..MAX_REJECTIONS {
                        let mean = if m_lo == m_hi {
                            m_lo
                        } else {
                            rng.random_range(m_lo..m_hi)
                        };
                        // Variance zero is excluded: uniform on (v_lo, v_hi].
                        let variance = v_hi - rng.random::<f64>() * (v_hi - v_lo);
                        if variance > 0.0 && variance < mean * (1.0 - mean) {
                            return ArmSpec::from_moments(mean, variance);
                        }
                    }
                    Err(Error::Data(
                        "random instance: feasible region too small to sample".into(),
                    ))
                })
                .collect()
        })
        .collect()
}

/// Loaded instances and their provenance.
#[derive(Debug, Clone)]
pub struct LoadedInstances {
    pub instances: Vec<BanditInstance>,
    pub provenance: DataProvenance,
}

/// Builds the configured instances. The config must already be valid.
pub fn load_instances(config: &ExperimentConfig) -> Result<LoadedInstances> {
    let risk = config.risk.params()?;
    let src = &config.instance;
    let (arm_sets, provenance) = if let Some(table) = &src.table {
        let id: TableId = table.parse()?;
        let (arms, sha256) = load_table_arms(id)?;
        (
            vec![arms],
            DataProvenance::Table {
                id: id.name().into(),
                sha256,
            },
        )
    } else if let Some(path) = &src.csv {
        let text = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let arms = read_instance_csv(path)?;
        let provenance = DataProvenance::Csv {
            path: path.display().to_string(),
            sha256: sha256_hex(&text),
        };
        (vec![arms], provenance)
    } else if let Some(text) = &src.inline {
        (
            vec![parse_instance_csv(text)?],
            DataProvenance::Inline {
                sha256: sha256_hex(text.as_bytes()),
            },
        )
    } else if let Some(spec) = &src.random {
        (
            generate_random_instances(spec)?,
            DataProvenance::Random { seed: spec.seed },
        )
    } else {
        return Err(Error::config("instance", "no instance source configured"));
    };
    let instances = arm_sets
        .into_iter()
        .map(|arms| BanditInstance::new(arms, risk))
        .collect::<Result<_>>()?;
    Ok(LoadedInstances {
        instances,
        provenance,
    })
}
