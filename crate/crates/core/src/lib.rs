//! Discrete multi-attribute choice by threshold sifting followed by a
//! lexicographic dominance search over importance levels ("ladder search").
//!
//! The pipeline has two stages:
//!
//! 1. [`psp`] drops every alternative that fails one of the basic thresholds.
//! 2. [`lsp`] walks the dominance levels from most to least important, keeping
//!    the dominant alternatives at each level until one remains.
//!
//! [`evaluate`] runs both after validating the task. The [`baselines`] module
//! holds the prospect-theory and image-theory choosers used for comparison,
//! and [`oracle`] holds independent brute-force implementations plus a seeded
//! task generator for property tests.

pub mod baselines;
pub mod error;
pub mod ladder;
pub mod model;
pub mod oracle;
pub mod scenario;
pub mod sift;
pub mod value_order;

use serde::Serialize;

pub use error::{ErrorCategory, ValueError, Violation};
pub use ladder::{dominant_set, dominates, lsp, single_plan_gate, DominanceMode};
pub use model::{
    identical, validate_task, Alternative, Attribute, AttributeId, AttributeKind, AttributeValue, DecisionTask,
    DominancePartition, Elimination, LadderOutcome, LevelRecord, Polarity, Predicate, SiftResult, Threshold, Verdict,
};
pub use scenario::{outcome_json, parse_scenario, serialize_outcome, serialize_task, ScenarioError};
pub use sift::psp;
pub use value_order::{compare_values, ordinal_from_label, satisfies_threshold, PartialOrdering};

/// Sifting result and ladder outcome of one task.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decision {
    pub sift: SiftResult,
    pub outcome: LadderOutcome,
}

/// Validates `task`, then runs sifting and the ladder search.
pub fn evaluate(task: &DecisionTask, mode: DominanceMode) -> Result<Decision, Vec<Violation>> {
    let violations = validate_task(task);
    if !violations.is_empty() {
        return Err(violations);
    }
    let sift = psp(task);
    let outcome = lsp(task, &sift.feasible, mode);
    Ok(Decision { sift, outcome })
}
