//! The RAMGapE meta-algorithm.
//!
//! Each round computes, for every arm, an optimistic ambiguity index `V_i(t)`
//! from the confidence intervals of its mean and risk. The most ambiguous arm
//! `m_t` and its most relevant comparator `p_t` are identified, and whichever
//! of the two has been pulled less is sampled. Both settings share this rule:
//! the fixed-budget variant stops after `n` pulls, the fixed-confidence
//! variant as soon as `V(t) < eps`. The returned set is always the empirical
//! Pareto set at the stopping round.

mod index;
mod run;
mod setting;
mod state;
mod trace;

pub use index::{index_v, select_mt_pt, wider_of_pair, IndexSnapshot, Selection};
pub(crate) use run::Engine;
pub use run::{
    pull_arm, ramgape_name, run_fixed_budget, run_fixed_confidence, run_ramgape, ArmSummary,
    Decision, NoopObserver, Observer, RunResult, StopReason,
};
pub use setting::{recommended_a, InitRule, Setting};
pub use state::{empirical_pareto, RoundState};
pub use trace::{write_trace_csv, TraceRecorder, TraceRow};
