//! Uniform allocation and its two elimination variants.

use super::argmin;
use crate::error::{Error, Result};
use crate::ramgape::{Engine, IndexSnapshot, StopReason};

/// Cycles through the arms. Under fixed confidence it stops on the same
/// ambiguity rule as RAMGapE.
pub(super) fn round_robin(engine: &mut Engine<'_>) -> Result<StopReason> {
    let k = engine.num_arms() as u64;
    let fixed_budget = engine.setting.is_fixed_budget();
    loop {
        if let Some(reason) = engine.exhausted() {
            if fixed_budget {
                return Ok(reason);
            }
        }
        let mut selection = None;
        if !fixed_budget {
            let sel = IndexSnapshot::from_state(&engine.state).select()?;
            if engine.rule_met(sel.index) {
                return Ok(StopReason::Rule);
            }
            if let Some(reason) = engine.exhausted() {
                return Ok(reason);
            }
            selection = Some(sel);
        }
        let arm = (engine.state.total_pulls() % k) as usize;
        engine.pull(arm, selection);
    }
}

/// Dominated-elimination round robin (fixed confidence only).
///
/// A pointer walks the arms cyclically; arms outside the empirical Pareto set
/// whose ambiguity is already at most `eps` are skipped without a pull.
/// Ambiguities are recomputed only after an actual pull. Stops once the
/// largest ambiguity is at most `eps`.
pub(super) fn dominated_elimination(engine: &mut Engine<'_>) -> Result<StopReason> {
    let k = engine.num_arms();
    let eps = engine.setting.eps();
    let mut pointer = 0usize;
    let mut skipped = 0usize;
    let mut snapshot = IndexSnapshot::from_state(&engine.state);
    let mut ambiguity = snapshot.ambiguities()?;
    loop {
        let max = ambiguity.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max <= eps {
            return Ok(StopReason::Rule);
        }
        if let Some(reason) = engine.exhausted() {
            return Ok(reason);
        }
        let arm = pointer % k;
        pointer += 1;
        if snapshot.in_pareto()[arm] || ambiguity[arm] > eps {
            let selection = snapshot.select()?;
            engine.pull(arm, Some(selection));
            snapshot = IndexSnapshot::from_state(&engine.state);
            ambiguity = snapshot.ambiguities()?;
            skipped = 0;
        } else {
            skipped += 1;
            // Some arm has ambiguity above eps, so a full cycle of skips
            // cannot happen unless the bookkeeping is broken.
            if skipped >= k {
                return Err(Error::Internal(
                    "dominated elimination skipped every arm".into(),
                ));
            }
        }
    }
}

/// Least-important elimination round robin (fixed budget only): cycles
/// through the arms but skips the one with the smallest ambiguity.
pub(super) fn least_important_elimination(engine: &mut Engine<'_>) -> Result<StopReason> {
    let k = engine.num_arms();
    let mut pointer = 0usize;
    let mut ambiguity = IndexSnapshot::from_state(&engine.state).ambiguities()?;
    loop {
        if let Some(reason) = engine.exhausted() {
            return Ok(reason);
        }
        let arm = pointer % k;
        pointer += 1;
        let least = argmin(ambiguity.iter().copied().enumerate()).expect("at least two arms");
        if arm != least {
            engine.pull(arm, None);
            ambiguity = IndexSnapshot::from_state(&engine.state).ambiguities()?;
        }
    }
}
