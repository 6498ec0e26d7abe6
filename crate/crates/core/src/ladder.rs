//! Dominance on attribute subsets and the ladder search over importance levels.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::model::{Alternative, AttributeId, DecisionTask, LadderOutcome, LevelRecord, Verdict};
use crate::value_order::{compare_values, satisfies, PartialOrdering};

/// How the dominant set of a level is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceMode {
    /// Keep the single alternative, if any, that has one attribute strictly
    /// better than every rival and no attribute worse than any rival.
    #[default]
    Global,
    /// Keep every alternative that no other alternative dominates.
    Undominated,
}

impl DominanceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DominanceMode::Global => "global",
            DominanceMode::Undominated => "undominated",
        }
    }
}

impl std::str::FromStr for DominanceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "global" => Ok(DominanceMode::Global),
            "undominated" => Ok(DominanceMode::Undominated),
            other => Err(format!(
                "unknown dominance mode {other:?} (expected global or undominated)"
            )),
        }
    }
}

fn order(s: &Alternative, t: &Alternative, attr: AttributeId, task: &DecisionTask) -> PartialOrdering {
    match (s.value(attr), t.value(attr)) {
        (Some(a), Some(b)) => compare_values(a, b, task.polarity(attr)).unwrap_or(PartialOrdering::Incomparable),
        _ => PartialOrdering::Incomparable,
    }
}

/// `s` is at least as good as `t` on every attribute in `attrs` and strictly
/// better on at least one.
pub fn dominates(s: &Alternative, t: &Alternative, attrs: &BTreeSet<AttributeId>, task: &DecisionTask) -> bool {
    let mut strict = false;
    for &k in attrs {
        match order(s, t, k, task) {
            PartialOrdering::Better => strict = true,
            PartialOrdering::Equal => {}
            _ => return false,
        }
    }
    strict
}

fn beats_all(s: &Alternative, rivals: &[&Alternative], attrs: &BTreeSet<AttributeId>, task: &DecisionTask) -> bool {
    let no_worse = attrs
        .iter()
        .all(|&k| rivals.iter().all(|t| order(s, t, k, task).is_at_least_as_good()));
    let strictly_ahead = || {
        attrs
            .iter()
            .any(|&k| rivals.iter().all(|t| order(s, t, k, task) == PartialOrdering::Better))
    };
    no_worse && (rivals.is_empty() || strictly_ahead())
}

/// Dominant subset of `candidates` on `attrs`, in candidate order.
///
/// Ids that do not name an alternative of `task` are ignored.
pub fn dominant_set(
    candidates: &[String],
    attrs: &BTreeSet<AttributeId>,
    mode: DominanceMode,
    task: &DecisionTask,
) -> Vec<String> {
    let alts: Vec<&Alternative> = candidates.iter().filter_map(|id| task.alternative(id)).collect();
    let keep = |i: usize| -> bool {
        let s = alts[i];
        match mode {
            DominanceMode::Undominated => !alts
                .iter()
                .enumerate()
                .any(|(j, t)| j != i && dominates(t, s, attrs, task)),
            DominanceMode::Global => {
                let rivals: Vec<&Alternative> = alts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, t)| *t)
                    .collect();
                beats_all(s, &rivals, attrs, task)
            }
        }
    };
    (0..alts.len())
        .filter(|&i| keep(i))
        .map(|i| alts[i].id.clone())
        .collect()
}

/// Accept-or-abstain rule for a lone feasible alternative.
///
/// With an aspiration block the alternative is chosen only when it meets
/// every aspiration threshold; without one it is chosen outright.
pub fn single_plan_gate(s: &Alternative, task: &DecisionTask) -> LadderOutcome {
    let accepted = match &task.aspiration {
        None => true,
        Some(list) => list.iter().all(|t| {
            s.value(t.attribute)
                .is_some_and(|v| satisfies(v, &t.predicate).unwrap_or(false))
        }),
    };
    let verdict = if accepted {
        Verdict::Chosen(s.id.clone())
    } else {
        Verdict::Abstain
    };
    LadderOutcome::new(verdict, Vec::new())
}

/// Ladder search over the feasible set, from the most important level down.
///
/// Each level filters the survivors of the level above. The search stops
/// with `Chosen` as soon as one survivor remains, with `Repartition` if a
/// level leaves none (only possible in `Global` mode), and with
/// `NoUniqueChoice` when level 1 still leaves several. The trace never holds
/// more than L records.
pub fn lsp(task: &DecisionTask, feasible: &[String], mode: DominanceMode) -> LadderOutcome {
    match feasible {
        [] => return LadderOutcome::new(Verdict::Abstain, Vec::new()),
        [only] => {
            return match task.alternative(only) {
                Some(s) => single_plan_gate(s, task),
                None => LadderOutcome::new(Verdict::Abstain, Vec::new()),
            }
        }
        _ => {}
    }

    let mut survivors = feasible.to_vec();
    let mut trace = Vec::new();
    for r in (1..=task.partition.level_count()).rev() {
        let attrs = &task.partition.levels[r - 1];
        let after = dominant_set(&survivors, attrs, mode, task);
        trace.push(LevelRecord {
            r,
            attribute_ids: attrs.clone(),
            survivors_before: survivors,
            survivors_after: after.clone(),
        });
        match after.len() {
            0 => return LadderOutcome::new(Verdict::Repartition, trace),
            1 => return LadderOutcome::new(Verdict::Chosen(after[0].clone()), trace),
            _ => survivors = after,
        }
    }
    LadderOutcome::new(Verdict::NoUniqueChoice, trace)
}
