use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::{ArmSpec, BanditInstance, RiskParams};
use crate::error::{Error, Result};

/// Environment variable that redirects table loading to another directory.
pub const DATA_DIR_ENV: &str = "RAMGAPE_DATA_DIR";

/// Bundled arm-parameter tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    /// Ten arms, means in `[0.4, 0.6]`, variances in `[0, 0.2]`.
    Exp3K10,
    /// One hundred arms drawn from the same ranges.
    Exp4K100,
}

impl TableId {
    pub const ALL: [TableId; 2] = [TableId::Exp3K10, TableId::Exp4K100];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Exp3K10 => "exp3_k10",
            TableId::Exp4K100 => "exp4_k100",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.csv", self.name())
    }

    /// SHA-256 of the table file, guarding against transcription drift.
    pub fn expected_sha256(self) -> &'static str {
        match self {
            TableId::Exp3K10 => "9409e396f70d05160512001d04c2fcbfaf2dd6fc67e3fb1fa63f29c762b350a8",
            TableId::Exp4K100 => "eb1c3aaab0ed2398f2909720fc0ddd497f735a4a60f6437c7c20a4aee32f80e2",
        }
    }

    fn bundled(self) -> &'static str {
        match self {
            TableId::Exp3K10 => include_str!("../../data/exp3_k10.csv"),
            TableId::Exp4K100 => include_str!("../../data/exp4_k100.csv"),
        }
    }

    /// Raw CSV text, from `RAMGAPE_DATA_DIR` when set, otherwise the bundled copy.
    pub fn load_text(self) -> Result<String> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => {
                let path = PathBuf::from(dir).join(self.file_name());
                std::fs::read_to_string(&path).map_err(|e| Error::io(path, e))
            }
            None => Ok(self.bundled().to_owned()),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                Error::config(
                    "table",
                    format!("unknown table id {s:?} (expected exp3_k10 or exp4_k100)"),
                )
            })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Loads a bundled table, verifies its hash and builds the instance with
/// `alpha = 1 / (3 + rho)`.
pub fn load_instance_table(table: TableId, rho: f64) -> Result<BanditInstance> {
    let (arms, _) = load_table_arms(table)?;
    BanditInstance::new(arms, RiskParams::new(rho)?)
}

/// Arms of a table together with the verified SHA-256 of its text.
pub fn load_table_arms(table: TableId) -> Result<(Vec<ArmSpec>, String)> {
    let text = table.load_text()?;
    let digest = sha256_hex(text.as_bytes());
    if digest != table.expected_sha256() {
        return Err(Error::Data(format!(
            "{} hash mismatch: expected {}, found {digest}",
            table.file_name(),
            table.expected_sha256()
        )));
    }
    Ok((parse_instance_csv(&text)?, digest))
}

/// Parses the `index,a,b` arm table format.
///
/// The header row is mandatory, indices must run `1..=K` in order and both
/// shapes must be finite and positive.
pub fn parse_instance_csv(text: &str) -> Result<Vec<ArmSpec>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Data(format!("cannot read header: {e}")))?;
    if headers.iter().collect::<Vec<_>>() != ["index", "a", "b"] {
        return Err(Error::Data(format!(
            "expected header `index,a,b`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut arms = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| Error::Data(format!("line {line}: {e}")))?;
        if record.len() != 3 {
            return Err(Error::Data(format!(
                "line {line}: expected 3 fields, found {}",
                record.len()
            )));
        }
        let index: usize = record[0]
            .parse()
            .map_err(|_| Error::Data(format!("line {line}: bad index {:?}", &record[0])))?;
        if index != arms.len() + 1 {
            return Err(Error::Data(format!(
                "line {line}: index {index} out of sequence (expected {})",
                arms.len() + 1
            )));
        }
        let shape = |field: usize, name: &str| -> Result<f64> {
            record[field]
                .parse::<f64>()
                .map_err(|_| Error::Data(format!("line {line}: bad {name} {:?}", &record[field])))
        };
        let arm = ArmSpec::new(shape(1, "a")?, shape(2, "b")?)
            .map_err(|e| Error::Data(format!("line {line}: {e}")))?;
        arms.push(arm);
    }
    if arms.is_empty() {
        return Err(Error::Data("no arms listed".into()));
    }
    Ok(arms)
}

pub fn read_instance_csv(path: &Path) -> Result<Vec<ArmSpec>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance_csv(&text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}
