use std::io::Write;

use super::run::{Decision, Observer};
use super::RoundState;
use crate::error::Result;
use crate::oracle::Oracle;

/// One pulled sample: round number, arm, the selection behind it (when the
/// algorithm made one) and the regret of the empirical Pareto set afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: u64,
    pub arm: usize,
    pub most_ambiguous: Option<usize>,
    pub comparator: Option<usize>,
    pub index: Option<f64>,
    pub regret: Option<f64>,
}

/// Observer that records a [`TraceRow`] per sample, scoring regret when given
/// an oracle.
#[derive(Debug)]
pub struct TraceRecorder<'o> {
    oracle: Option<&'o Oracle>,
    pending: Option<Decision>,
    rows: Vec<TraceRow>,
}

impl<'o> TraceRecorder<'o> {
    pub fn new(oracle: Option<&'o Oracle>) -> Self {
        Self {
            oracle,
            pending: None,
            rows: Vec::new(),
        }
    }

    pub fn rows(&self) -> &[TraceRow] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<TraceRow> {
        self.rows
    }
}

impl Observer for TraceRecorder<'_> {
    fn on_decision(&mut self, _state: &RoundState, decision: &Decision) {
        self.pending = Some(*decision);
    }

    fn on_sample(&mut self, state: &RoundState, arm: usize) {
        let selection = self.pending.take().and_then(|d| d.selection);
        self.rows.push(TraceRow {
            t: state.total_pulls(),
            arm,
            most_ambiguous: selection.map(|s| s.most_ambiguous),
            comparator: selection.map(|s| s.comparator),
            index: selection.map(|s| s.index),
            regret: self
                .oracle
                .map(|o| o.simple_regret_mask(&state.empirical_pareto())),
        });
    }
}

/// Writes trace rows as CSV: `t,I_t,m_t,p_t,V_t,regret`, prefixed with an
/// `algorithm` column when one is given. Arms are numbered from 1; absent
/// values are left empty.
pub fn write_trace_csv<W: Write>(out: W, rows: &[TraceRow], algorithm: Option<&str>) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header = vec!["t", "I_t", "m_t", "p_t", "V_t", "regret"];
    if algorithm.is_some() {
        header.insert(0, "algorithm");
    }
    writer.write_record(&header)?;
    let opt_arm = |a: Option<usize>| a.map(|a| (a + 1).to_string()).unwrap_or_default();
    let opt_f64 = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    for row in rows {
        let mut record = vec![
            row.t.to_string(),
            (row.arm + 1).to_string(),
            opt_arm(row.most_ambiguous),
            opt_arm(row.comparator),
            opt_f64(row.index),
            opt_f64(row.regret),
        ];
        if let Some(name) = algorithm {
            record.insert(0, name.to_owned());
        }
        writer.write_record(&record)?;
    }
    writer
        .flush()
        .map_err(|e| crate::error::Error::io("<trace>", e))?;
    Ok(())
}
