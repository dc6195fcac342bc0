//! Pull both arms of the ambiguous pair each round.

use crate::error::Result;
use crate::ramgape::{Engine, IndexSnapshot, StopReason};

/// Each round pulls `m_t` then `p_t`. When only one sample of budget or cap
/// remains, only `m_t` is pulled.
pub(super) fn run(engine: &mut Engine<'_>) -> Result<StopReason> {
    loop {
        if engine.setting.is_fixed_budget() {
            if let Some(reason) = engine.exhausted() {
                return Ok(reason);
            }
        }
        let selection = IndexSnapshot::from_state(&engine.state).select()?;
        if engine.rule_met(selection.index) {
            return Ok(StopReason::Rule);
        }
        if let Some(reason) = engine.exhausted() {
            return Ok(reason);
        }
        engine.pull(selection.most_ambiguous, Some(selection));
        if engine.exhausted().is_none() {
            engine.pull(selection.comparator, Some(selection));
        }
    }
}
