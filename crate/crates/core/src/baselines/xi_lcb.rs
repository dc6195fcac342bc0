//! Optimistic risk minimisation: pull the arm with the lowest `xi_hat - beta`.

use super::argmin;
use crate::ramgape::{Engine, StopReason};

pub(super) fn run(engine: &mut Engine<'_>) -> StopReason {
    loop {
        if let Some(reason) = engine.exhausted() {
            return reason;
        }
        let state = &engine.state;
        let arm = argmin((0..state.num_arms()).map(|i| (i, state.point(i).xi - state.beta(i))))
            .expect("at least two arms");
        engine.pull(arm, None);
    }
}
