//! Scenario files and outcome traces.
//!
//! A scenario is UTF-8 JSON:
//!
//! ```json
//! {
//!   "task_id": "case3",
//!   "attributes": [
//!     { "id": 1, "name": "legality", "kind": "categorical", "polarity": "none" },
//!     { "id": 2, "name": "price", "kind": "numeric", "polarity": "cost" }
//!   ],
//!   "basic": { "ids": [1], "thresholds": { "1": { "allowed": ["legal"] } } },
//!   "dominance": { "levels": [[2]] },
//!   "alternatives": [
//!     { "id": "site-1", "values": { "1": { "category": "legal" }, "2": 100 } }
//!   ]
//! }
//! ```
//!
//! Dominance levels are listed least important first. Values are a bare
//! number (crisp), `{"interval": [lo, hi]}`, `{"at_least": x}`,
//! `{"ordinal": "moderate"}` or `{"category": "white"}`. Thresholds and
//! aspirations are maps from attribute id (as a string) to exactly one of
//! `max`, `min`, `min_level`, `max_level` or `allowed`. Ordinal attributes may
//! declare extra labels with `"labels": {"rare": 1, ...}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::error::{ErrorCategory, Violation};
use crate::model::*;
use crate::value_order::{ordinal_from_label, ordinal_label};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: unknown ordinal label {label:?}")]
    UnknownLabel { context: String, label: String },
    #[error("{}", describe(.0))]
    Invalid(Vec<Violation>),
}

fn describe(violations: &[Violation]) -> String {
    let parts: Vec<String> = violations.iter().map(|v| format!("[{}] {v}", v.category())).collect();
    parts.join("; ")
}

impl ScenarioError {
    /// Primary category of the error.
    pub fn category(&self) -> ErrorCategory {
        self.categories()[0]
    }

    /// Every category present; never empty.
    pub fn categories(&self) -> Vec<ErrorCategory> {
        match self {
            ScenarioError::Syntax { .. } | ScenarioError::UnknownLabel { .. } => vec![ErrorCategory::Syntax],
            ScenarioError::Invalid(v) if v.is_empty() => vec![ErrorCategory::InvalidValue],
            ScenarioError::Invalid(v) => categories(v),
        }
    }
}

/// Map keyed by attribute id, written as a JSON object with string keys in
/// ascending id order. Duplicate keys are rejected.
#[derive(Debug, Clone, PartialEq)]
struct IdMap<T>(Vec<(AttributeId, T)>);

impl<T> Default for IdMap<T> {
    fn default() -> Self {
        IdMap(Vec::new())
    }
}

impl<T: Serialize> Serialize for IdMap<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for IdMap<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct IdMapVisitor<T>(PhantomData<T>);

        impl<'de, T: Deserialize<'de>> Visitor<'de> for IdMapVisitor<T> {
            type Value = IdMap<T>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object keyed by attribute id")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut entries: Vec<(AttributeId, T)> = Vec::new();
                while let Some(key) = access.next_key::<String>()? {
                    let id: AttributeId = key
                        .parse()
                        .map_err(|_| de::Error::custom(format!("attribute key {key:?} is not an integer id")))?;
                    if entries.iter().any(|(k, _)| *k == id) {
                        return Err(de::Error::custom(format!("attribute key {key:?} appears twice")));
                    }
                    entries.push((id, access.next_value()?));
                }
                entries.sort_by_key(|(k, _)| *k);
                Ok(IdMap(entries))
            }
        }

        deserializer.deserialize_map(IdMapVisitor(PhantomData))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    task_id: String,
    attributes: Vec<RawAttribute>,
    basic: RawBasic,
    dominance: RawDominance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    aspiration: Option<IdMap<RawPredicate>>,
    alternatives: Vec<RawAlternative>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAttribute {
    id: AttributeId,
    name: String,
    kind: AttributeKind,
    polarity: Polarity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<String, u8>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasic {
    ids: Vec<AttributeId>,
    thresholds: IdMap<RawPredicate>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDominance {
    levels: Vec<Vec<AttributeId>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
enum RawPredicate {
    Max(f64),
    Min(f64),
    MinLevel(String),
    MaxLevel(String),
    Allowed(Vec<String>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlternative {
    id: String,
    values: IdMap<RawValue>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalValue {
    interval: [f64; 2],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtLeastValue {
    at_least: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrdinalValue {
    ordinal: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryValue {
    category: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Crisp(f64),
    Interval(IntervalValue),
    AtLeast(AtLeastValue),
    Ordinal(OrdinalValue),
    Category(CategoryValue),
}

struct Labels<'a> {
    attributes: &'a [Attribute],
}

impl Labels<'_> {
    fn level(
        &self,
        attribute: AttributeId,
        label: &str,
        context: impl FnOnce() -> String,
    ) -> Result<u8, ScenarioError> {
        let declared = self
            .attributes
            .iter()
            .find(|a| a.id == attribute)
            .and_then(|a| a.labels.get(label));
        match declared {
            Some(level) => Ok(*level),
            None => ordinal_from_label(label).map_err(|_| ScenarioError::UnknownLabel {
                context: context(),
                label: label.to_string(),
            }),
        }
    }

    fn label(&self, attribute: AttributeId, level: u8) -> String {
        let declared = self.attributes.iter().find(|a| a.id == attribute).and_then(|a| {
            a.labels
                .iter()
                .find(|(_, l)| **l == level)
                .map(|(name, _)| name.clone())
        });
        declared
            .or_else(|| ordinal_label(level).map(str::to_string))
            .unwrap_or_else(|| level.to_string())
    }
}

fn predicate_from_raw(
    labels: &Labels,
    attribute: AttributeId,
    raw: RawPredicate,
    what: &str,
) -> Result<Predicate, ScenarioError> {
    let context = || format!("{what} on attribute {attribute}");
    Ok(match raw {
        RawPredicate::Max(c) => Predicate::Max(c),
        RawPredicate::Min(c) => Predicate::Min(c),
        RawPredicate::MinLevel(l) => Predicate::MinLevel(labels.level(attribute, &l, context)?),
        RawPredicate::MaxLevel(l) => Predicate::MaxLevel(labels.level(attribute, &l, context)?),
        RawPredicate::Allowed(set) => Predicate::Allowed(set.into_iter().collect()),
    })
}

fn predicate_to_raw(labels: &Labels, attribute: AttributeId, p: &Predicate) -> RawPredicate {
    match p {
        Predicate::Max(c) => RawPredicate::Max(*c),
        Predicate::Min(c) => RawPredicate::Min(*c),
        Predicate::MinLevel(l) => RawPredicate::MinLevel(labels.label(attribute, *l)),
        Predicate::MaxLevel(l) => RawPredicate::MaxLevel(labels.label(attribute, *l)),
        Predicate::Allowed(set) => RawPredicate::Allowed(set.iter().cloned().collect()),
    }
}

fn task_from_raw(raw: RawScenario) -> Result<DecisionTask, ScenarioError> {
    let attributes: Vec<Attribute> = raw
        .attributes
        .into_iter()
        .map(|a| Attribute {
            id: a.id,
            name: a.name,
            kind: a.kind,
            polarity: a.polarity,
            unit: a.unit,
            labels: a.labels,
        })
        .collect();
    let labels = Labels {
        attributes: &attributes,
    };

    let mut thresholds = Vec::new();
    for (id, p) in raw.basic.thresholds.0 {
        thresholds.push(Threshold::new(id, predicate_from_raw(&labels, id, p, "threshold")?));
    }
    let aspiration = match raw.aspiration {
        None => None,
        Some(map) => {
            let mut list = Vec::new();
            for (id, p) in map.0 {
                list.push(Threshold::new(id, predicate_from_raw(&labels, id, p, "aspiration")?));
            }
            Some(list)
        }
    };

    let mut violations = Vec::new();
    let mut levels = Vec::new();
    for (i, level) in raw.dominance.levels.iter().enumerate() {
        let mut set = BTreeSet::new();
        for id in level {
            if !set.insert(*id) {
                violations.push(Violation::RepeatedInLevel {
                    level: i + 1,
                    attribute: *id,
                });
            }
        }
        levels.push(set);
    }
    let mut basic_ids = BTreeSet::new();
    for id in &raw.basic.ids {
        if !basic_ids.insert(*id) {
            violations.push(Violation::RepeatedBasicId { attribute: *id });
        }
    }

    let mut alternatives = Vec::new();
    for alt in raw.alternatives {
        let mut values = BTreeMap::new();
        for (id, v) in alt.values.0 {
            let value = match v {
                RawValue::Crisp(x) => AttributeValue::Crisp(x),
                RawValue::Interval(IntervalValue { interval: [lo, hi] }) => AttributeValue::Interval { lo, hi },
                RawValue::AtLeast(AtLeastValue { at_least }) => AttributeValue::AtLeast(at_least),
                RawValue::Ordinal(OrdinalValue { ordinal }) => {
                    AttributeValue::Ordinal(
                        labels.level(id, &ordinal, || format!("alternative {} attribute {id}", alt.id))?,
                    )
                }
                RawValue::Category(CategoryValue { category }) => AttributeValue::Category(category),
            };
            values.insert(id, value);
        }
        alternatives.push(Alternative { id: alt.id, values });
    }

    let task = DecisionTask {
        task_id: raw.task_id,
        attributes,
        basic_ids,
        thresholds,
        partition: DominancePartition::new(levels),
        aspiration,
        alternatives,
    };
    violations.extend(validate_task(&task));
    if violations.is_empty() {
        Ok(task)
    } else {
        Err(ScenarioError::Invalid(violations))
    }
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<DecisionTask, ScenarioError> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    task_from_raw(raw)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Writes a task in scenario format (pretty-printed, trailing newline).
pub fn serialize_task(task: &DecisionTask) -> String {
    let labels = Labels {
        attributes: &task.attributes,
    };
    let raw = RawScenario {
        task_id: task.task_id.clone(),
        attributes: task
            .attributes
            .iter()
            .map(|a| RawAttribute {
                id: a.id,
                name: a.name.clone(),
                kind: a.kind,
                polarity: a.polarity,
                unit: a.unit.clone(),
                labels: a.labels.clone(),
            })
            .collect(),
        basic: RawBasic {
            ids: task.basic_ids.iter().copied().collect(),
            thresholds: threshold_map(&labels, &task.thresholds),
        },
        dominance: RawDominance {
            levels: task
                .partition
                .levels
                .iter()
                .map(|l| l.iter().copied().collect())
                .collect(),
        },
        aspiration: task.aspiration.as_ref().map(|list| threshold_map(&labels, list)),
        alternatives: task
            .alternatives
            .iter()
            .map(|alt| RawAlternative {
                id: alt.id.clone(),
                values: IdMap(
                    alt.values
                        .iter()
                        .map(|(id, v)| {
                            let raw = match v {
                                AttributeValue::Crisp(x) => RawValue::Crisp(*x),
                                AttributeValue::Interval { lo, hi } => {
                                    RawValue::Interval(IntervalValue { interval: [*lo, *hi] })
                                }
                                AttributeValue::AtLeast(x) => RawValue::AtLeast(AtLeastValue { at_least: *x }),
                                AttributeValue::Ordinal(l) => RawValue::Ordinal(OrdinalValue {
                                    ordinal: labels.label(*id, *l),
                                }),
                                AttributeValue::Category(c) => {
                                    RawValue::Category(CategoryValue { category: c.clone() })
                                }
                            };
                            (*id, raw)
                        })
                        .collect(),
                ),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&raw).expect("scenario serialization cannot fail");
    text.push('\n');
    text
}

fn threshold_map(labels: &Labels, list: &[Threshold]) -> IdMap<RawPredicate> {
    let mut entries: Vec<(AttributeId, RawPredicate)> = list
        .iter()
        .map(|t| (t.attribute, predicate_to_raw(labels, t.attribute, &t.predicate)))
        .collect();
    entries.sort_by_key(|(k, _)| *k);
    IdMap(entries)
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Plain-text trace: a header line `Verdict: id` (or `-`), then one line per level.
pub fn serialize_outcome(outcome: &LadderOutcome) -> String {
    let mut out = format!("{}\n", outcome.verdict);
    for rec in &outcome.trace {
        out.push_str(&format!(
            "level {} | attrs {{{}}} | before [{}] | after [{}]\n",
            rec.r,
            join(&rec.attribute_ids),
            join(&rec.survivors_before),
            join(&rec.survivors_after),
        ));
    }
    out
}

#[derive(Serialize)]
struct OutcomeJson<'a> {
    verdict: &'static str,
    chosen: Option<&'a str>,
    trace: &'a [LevelRecord],
}

/// JSON trace; level records carry their field names unchanged.
pub fn outcome_json(outcome: &LadderOutcome) -> serde_json::Value {
    serde_json::to_value(OutcomeJson {
        verdict: outcome.verdict.name(),
        chosen: outcome.verdict.chosen(),
        trace: &outcome.trace,
    })
    .expect("outcome serialization cannot fail")
}
