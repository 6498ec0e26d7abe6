//! Primary sifting: drop every alternative that fails a basic threshold.

use crate::model::{DecisionTask, Elimination, SiftResult};
use crate::value_order::satisfies_threshold;

/// Runs the sifting pass over `task`.
///
/// An alternative survives iff it satisfies every basic threshold. Every
/// failing `(attribute, threshold, value)` triple is recorded, and survivors
/// keep their input order. A missing value or a kind mismatch counts as a
/// failure; neither occurs in a task that passes validation.
///
/// The fixed-point loop of the original procedure collapses to one pass since
/// an alternative's fate depends only on its own values.
pub fn psp(task: &DecisionTask) -> SiftResult {
    let mut result = SiftResult::default();
    for alt in &task.alternatives {
        let before = result.eliminations.len();
        for threshold in &task.thresholds {
            let value = alt.value(threshold.attribute);
            let pass = value.is_some_and(|v| satisfies_threshold(v, threshold).unwrap_or(false));
            if !pass {
                result.eliminations.push(Elimination {
                    alternative: alt.id.clone(),
                    attribute: threshold.attribute,
                    threshold: threshold.clone(),
                    value: value.cloned(),
                });
            }
        }
        if result.eliminations.len() == before {
            result.feasible.push(alt.id.clone());
        }
    }
    result
}
