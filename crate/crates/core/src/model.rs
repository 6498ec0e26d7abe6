//! Domain types shared by every stage of the engine.
//!
//! Types are plain data. Nothing here is checked on construction; call
//! [`validate_task`] to get the full list of invariant violations for a task.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ErrorCategory, Violation};

/// Attribute index within a task. Valid ids are positive.
pub type AttributeId = u32;

pub const ORDINAL_MIN: u8 = 1;
pub const ORDINAL_MAX: u8 = 5;

/// A single attribute value of one alternative.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeValue {
    Crisp(f64),
    Interval {
        lo: f64,
        hi: f64,
    },
    /// Closed lower bound with no upper end ("3 years or more").
    AtLeast(f64),
    Ordinal(u8),
    Category(String),
}

/// Coarse classification used for kind checks between values, thresholds and attributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeKind {
    Numeric,
    Ordinal,
    Categorical,
}

impl fmt::Display for AttributeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttributeKind::Numeric => "numeric",
            AttributeKind::Ordinal => "ordinal",
            AttributeKind::Categorical => "categorical",
        })
    }
}

impl AttributeValue {
    pub fn interval(lo: f64, hi: f64) -> Self {
        AttributeValue::Interval { lo, hi }
    }

    pub fn category(label: impl Into<String>) -> Self {
        AttributeValue::Category(label.into())
    }

    pub fn kind(&self) -> AttributeKind {
        match self {
            AttributeValue::Crisp(_) | AttributeValue::Interval { .. } | AttributeValue::AtLeast(_) => {
                AttributeKind::Numeric
            }
            AttributeValue::Ordinal(_) => AttributeKind::Ordinal,
            AttributeValue::Category(_) => AttributeKind::Categorical,
        }
    }

    /// `(lo, hi)` bounds of a numeric value; `hi` is `+inf` for `AtLeast`.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            AttributeValue::Crisp(x) => Some((x, x)),
            AttributeValue::Interval { lo, hi } => Some((lo, hi)),
            AttributeValue::AtLeast(lo) => Some((lo, f64::INFINITY)),
            _ => None,
        }
    }

    /// Describes why this value is malformed, if it is.
    pub fn defect(&self) -> Option<String> {
        match *self {
            AttributeValue::Crisp(x) if !x.is_finite() => Some(format!("crisp value {x} is not finite")),
            AttributeValue::Interval { lo, hi } if !lo.is_finite() || !hi.is_finite() => {
                Some(format!("interval [{lo}, {hi}] has a non-finite bound"))
            }
            AttributeValue::Interval { lo, hi } if lo > hi => Some(format!("interval [{lo}, {hi}] has lo > hi")),
            AttributeValue::AtLeast(x) if !x.is_finite() => Some(format!("at_least bound {x} is not finite")),
            AttributeValue::Ordinal(l) if !(ORDINAL_MIN..=ORDINAL_MAX).contains(&l) => {
                Some(format!("ordinal level {l} outside 1..5"))
            }
            _ => None,
        }
    }
}

impl fmt::Display for AttributeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttributeValue::Crisp(x) => write!(f, "{x}"),
            AttributeValue::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
            AttributeValue::AtLeast(x) => write!(f, ">= {x}"),
            AttributeValue::Ordinal(l) => write!(f, "level {l}"),
            AttributeValue::Category(c) => write!(f, "{c:?}"),
        }
    }
}

/// Which direction of an attribute is preferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    /// Smaller is better.
    Cost,
    /// Larger is better.
    Benefit,
    /// Unordered (categorical attributes).
    None,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Cost => "cost",
            Polarity::Benefit => "benefit",
            Polarity::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Attribute {
    pub id: AttributeId,
    pub name: String,
    pub kind: AttributeKind,
    pub polarity: Polarity,
    pub unit: Option<String>,
    /// Extra ordinal labels declared by the scenario, mapped onto the 1..5 scale.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, u8>,
}

impl Attribute {
    pub fn new(id: AttributeId, name: impl Into<String>, kind: AttributeKind, polarity: Polarity) -> Self {
        Attribute {
            id,
            name: name.into(),
            kind,
            polarity,
            unit: None,
            labels: BTreeMap::new(),
        }
    }

    pub fn with_unit(mut self, unit: impl Into<String>) -> Self {
        self.unit = Some(unit.into());
        self
    }
}

/// Acceptance predicate on one attribute.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    /// Value must be `<=` the bound.
    Max(f64),
    /// Value must be `>=` the bound.
    Min(f64),
    MinLevel(u8),
    MaxLevel(u8),
    Allowed(BTreeSet<String>),
}

impl Predicate {
    pub fn kind(&self) -> AttributeKind {
        match self {
            Predicate::Max(_) | Predicate::Min(_) => AttributeKind::Numeric,
            Predicate::MinLevel(_) | Predicate::MaxLevel(_) => AttributeKind::Ordinal,
            Predicate::Allowed(_) => AttributeKind::Categorical,
        }
    }

    fn defect(&self) -> Option<String> {
        match self {
            Predicate::Max(c) | Predicate::Min(c) if !c.is_finite() => {
                Some(format!("threshold bound {c} is not finite"))
            }
            Predicate::MinLevel(l) | Predicate::MaxLevel(l) if !(ORDINAL_MIN..=ORDINAL_MAX).contains(l) => {
                Some(format!("threshold level {l} outside 1..5"))
            }
            Predicate::Allowed(set) if set.is_empty() => Some("allowed set is empty".to_string()),
            _ => None,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Max(c) => write!(f, "<= {c}"),
            Predicate::Min(c) => write!(f, ">= {c}"),
            Predicate::MinLevel(l) => write!(f, ">= level {l}"),
            Predicate::MaxLevel(l) => write!(f, "<= level {l}"),
            Predicate::Allowed(set) => {
                let labels: Vec<&str> = set.iter().map(String::as_str).collect();
                write!(f, "in {{{}}}", labels.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub attribute: AttributeId,
    pub predicate: Predicate,
}

impl Threshold {
    pub fn new(attribute: AttributeId, predicate: Predicate) -> Self {
        Threshold { attribute, predicate }
    }
}

/// Importance levels of the dominance attributes. `levels[0]` is the least
/// important level (level 1), the last entry is the most important (level L).
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DominancePartition {
    pub levels: Vec<BTreeSet<AttributeId>>,
}

impl DominancePartition {
    pub fn new(levels: Vec<BTreeSet<AttributeId>>) -> Self {
        DominancePartition { levels }
    }

    pub fn from_ids(levels: &[&[AttributeId]]) -> Self {
        DominancePartition {
            levels: levels.iter().map(|l| l.iter().copied().collect()).collect(),
        }
    }

    /// Number of levels, L.
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Attributes of level `r` (1-based).
    pub fn level(&self, r: usize) -> Option<&BTreeSet<AttributeId>> {
        r.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    pub fn top(&self) -> Option<&BTreeSet<AttributeId>> {
        self.levels.last()
    }

    /// Union of all levels (the dominance attribute set).
    pub fn attribute_ids(&self) -> BTreeSet<AttributeId> {
        self.levels.iter().flatten().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Alternative {
    pub id: String,
    pub values: BTreeMap<AttributeId, AttributeValue>,
}

impl Alternative {
    pub fn new(id: impl Into<String>, values: impl IntoIterator<Item = (AttributeId, AttributeValue)>) -> Self {
        Alternative {
            id: id.into(),
            values: values.into_iter().collect(),
        }
    }

    pub fn value(&self, attribute: AttributeId) -> Option<&AttributeValue> {
        self.values.get(&attribute)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionTask {
    pub task_id: String,
    pub attributes: Vec<Attribute>,
    pub basic_ids: BTreeSet<AttributeId>,
    pub thresholds: Vec<Threshold>,
    pub partition: DominancePartition,
    pub aspiration: Option<Vec<Threshold>>,
    pub alternatives: Vec<Alternative>,
}

impl DecisionTask {
    pub fn attribute(&self, id: AttributeId) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.id == id)
    }

    pub fn polarity(&self, id: AttributeId) -> Polarity {
        self.attribute(id).map_or(Polarity::None, |a| a.polarity)
    }

    pub fn alternative(&self, id: &str) -> Option<&Alternative> {
        self.alternatives.iter().find(|a| a.id == id)
    }

    pub fn attribute_ids(&self) -> BTreeSet<AttributeId> {
        self.attributes.iter().map(|a| a.id).collect()
    }

    pub fn alternative_ids(&self) -> Vec<String> {
        self.alternatives.iter().map(|a| a.id.clone()).collect()
    }

    /// Copy of the task keeping only the listed alternatives, in the task's order.
    pub fn restricted_to(&self, keep: &[String]) -> DecisionTask {
        let mut task = self.clone();
        task.alternatives.retain(|a| keep.contains(&a.id));
        task
    }
}

/// Alternatives are completely equal when their values agree on every basic
/// and every dominance attribute.
pub fn identical(a: &Alternative, b: &Alternative, task: &DecisionTask) -> bool {
    task.basic_ids
        .iter()
        .chain(task.partition.levels.iter().flatten())
        .all(|id| a.values.get(id) == b.values.get(id))
}

/// Elimination record produced by sifting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Elimination {
    pub alternative: String,
    pub attribute: AttributeId,
    pub threshold: Threshold,
    /// `None` when the alternative carries no value for the attribute.
    pub value: Option<AttributeValue>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SiftResult {
    pub feasible: Vec<String>,
    pub eliminations: Vec<Elimination>,
}

impl SiftResult {
    /// Ids removed by sifting, in first-elimination order, without repeats.
    pub fn eliminated(&self) -> Vec<String> {
        let mut ids: Vec<String> = Vec::new();
        for e in &self.eliminations {
            if !ids.contains(&e.alternative) {
                ids.push(e.alternative.clone());
            }
        }
        ids
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "verdict", content = "chosen", rename_all = "snake_case")]
pub enum Verdict {
    Chosen(String),
    Abstain,
    Repartition,
    NoUniqueChoice,
}

impl Verdict {
    pub fn chosen(&self) -> Option<&str> {
        match self {
            Verdict::Chosen(id) => Some(id),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Chosen(_) => "Chosen",
            Verdict::Abstain => "Abstain",
            Verdict::Repartition => "Repartition",
            Verdict::NoUniqueChoice => "NoUniqueChoice",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name(), self.chosen().unwrap_or("-"))
    }
}

/// One rung of the ladder search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRecord {
    pub r: usize,
    pub attribute_ids: BTreeSet<AttributeId>,
    pub survivors_before: Vec<String>,
    /// The dominant set at this level; its length is Q(r).
    pub survivors_after: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderOutcome {
    pub verdict: Verdict,
    pub trace: Vec<LevelRecord>,
}

impl LadderOutcome {
    pub fn new(verdict: Verdict, trace: Vec<LevelRecord>) -> Self {
        LadderOutcome { verdict, trace }
    }
}

/// Returns every invariant violation in `task`. An empty list means the task
/// is well formed.
pub fn validate_task(task: &DecisionTask) -> Vec<Violation> {
    let mut out = Vec::new();

    let mut seen = BTreeSet::new();
    for attr in &task.attributes {
        if attr.id == 0 {
            out.push(Violation::InvalidAttributeId);
        }
        if !seen.insert(attr.id) {
            out.push(Violation::DuplicateAttributeId { attribute: attr.id });
        }
        let polarity_ok = match attr.kind {
            AttributeKind::Categorical => attr.polarity == Polarity::None,
            _ => attr.polarity != Polarity::None,
        };
        if !polarity_ok {
            out.push(Violation::PolarityMismatch {
                attribute: attr.id,
                kind: attr.kind,
                polarity: attr.polarity,
            });
        }
        if !attr.labels.is_empty() && attr.kind != AttributeKind::Ordinal {
            out.push(Violation::Malformed {
                context: format!("attribute {}", attr.id),
                detail: "labels declared on a non-ordinal attribute".into(),
            });
        }
        for (label, level) in &attr.labels {
            if !(ORDINAL_MIN..=ORDINAL_MAX).contains(level) {
                out.push(Violation::Malformed {
                    context: format!("attribute {}", attr.id),
                    detail: format!("label {label:?} maps to level {level} outside 1..5"),
                });
            }
        }
    }
    let all_ids = task.attribute_ids();
    let kind_of = |id: AttributeId| task.attribute(id).map(|a| a.kind);

    for id in &task.basic_ids {
        if !all_ids.contains(id) {
            out.push(Violation::UnknownAttribute {
                context: "basic ids".into(),
                attribute: *id,
            });
        }
    }

    check_thresholds(task, &task.thresholds, "threshold", &mut out);
    let mut covered = BTreeSet::new();
    for t in &task.thresholds {
        if !covered.insert(t.attribute) {
            out.push(Violation::DuplicateThreshold { attribute: t.attribute });
        }
        if !task.basic_ids.contains(&t.attribute) {
            out.push(Violation::ThresholdOutsideBasic { attribute: t.attribute });
        }
    }
    for id in &task.basic_ids {
        if !covered.contains(id) {
            out.push(Violation::MissingThreshold { attribute: *id });
        }
    }

    // partition
    if task.partition.levels.is_empty() {
        out.push(Violation::EmptyPartition);
    }
    let mut level_of: BTreeMap<AttributeId, usize> = BTreeMap::new();
    for (i, level) in task.partition.levels.iter().enumerate() {
        let r = i + 1;
        if level.is_empty() {
            out.push(Violation::EmptyLevel { level: r });
        }
        for id in level {
            if !all_ids.contains(id) {
                out.push(Violation::UnknownAttribute {
                    context: format!("dominance level {r}"),
                    attribute: *id,
                });
            }
            if let Some(first) = level_of.insert(*id, r) {
                out.push(Violation::OverlappingLevels {
                    attribute: *id,
                    first,
                    second: r,
                });
            }
        }
    }
    let dominance_ids = task.partition.attribute_ids();
    for id in &all_ids {
        if !task.basic_ids.contains(id) && !dominance_ids.contains(id) {
            out.push(Violation::AttributeNotCovered { attribute: *id });
        }
    }

    if let Some(aspiration) = &task.aspiration {
        check_thresholds(task, aspiration, "aspiration", &mut out);
        let top = task.partition.top();
        let mut seen = BTreeSet::new();
        for t in aspiration {
            if !seen.insert(t.attribute) {
                out.push(Violation::DuplicateThreshold { attribute: t.attribute });
            }
            if all_ids.contains(&t.attribute) && !top.is_some_and(|l| l.contains(&t.attribute)) {
                out.push(Violation::AspirationOutsideTopLevel { attribute: t.attribute });
            }
        }
    }

    // alternatives
    let mut alt_ids = BTreeSet::new();
    for alt in &task.alternatives {
        if !alt_ids.insert(alt.id.as_str()) {
            out.push(Violation::DuplicateAlternativeId {
                alternative: alt.id.clone(),
            });
        }
        for id in &all_ids {
            if !alt.values.contains_key(id) {
                out.push(Violation::MissingValue {
                    alternative: alt.id.clone(),
                    attribute: *id,
                });
            }
        }
        for (id, value) in &alt.values {
            match kind_of(*id) {
                None => out.push(Violation::UnknownAttribute {
                    context: format!("alternative {}", alt.id),
                    attribute: *id,
                }),
                Some(kind) if kind != value.kind() => out.push(Violation::ValueKindMismatch {
                    alternative: alt.id.clone(),
                    attribute: *id,
                    expected: kind,
                    found: value.kind(),
                }),
                Some(_) => {}
            }
            if let Some(detail) = value.defect() {
                out.push(Violation::Malformed {
                    context: format!("alternative {} attribute {id}", alt.id),
                    detail,
                });
            }
        }
    }
    for (i, a) in task.alternatives.iter().enumerate() {
        for b in &task.alternatives[i + 1..] {
            if identical(a, b, task) {
                out.push(Violation::IdenticalAlternatives {
                    first: a.id.clone(),
                    second: b.id.clone(),
                });
            }
        }
    }

    out
}

fn check_thresholds(task: &DecisionTask, list: &[Threshold], what: &str, out: &mut Vec<Violation>) {
    for t in list {
        match task.attribute(t.attribute) {
            None => out.push(Violation::UnknownAttribute {
                context: what.to_string(),
                attribute: t.attribute,
            }),
            Some(attr) if attr.kind != t.predicate.kind() => out.push(Violation::ThresholdKindMismatch {
                attribute: t.attribute,
                expected: attr.kind,
                found: t.predicate.kind(),
            }),
            Some(_) => {}
        }
        if let Some(detail) = t.predicate.defect() {
            out.push(Violation::Malformed {
                context: format!("{what} on attribute {}", t.attribute),
                detail,
            });
        }
    }
}

/// Distinct categories present in a violation list, in first-seen order.
pub fn categories(violations: &[Violation]) -> Vec<ErrorCategory> {
    let mut cats = Vec::new();
    for v in violations {
        let c = v.category();
        if !cats.contains(&c) {
            cats.push(c);
        }
    }
    cats
}
