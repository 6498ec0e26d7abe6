use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{AttributeId, AttributeKind, Polarity};

/// Broad class of a rejected input. Scenario and validation errors map onto
/// exactly one category each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCategory {
    Syntax,
    UnknownReference,
    KindMismatch,
    DuplicateId,
    DuplicateAlternative,
    Partition,
    Coverage,
    InvalidValue,
}

impl ErrorCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Syntax => "syntax",
            ErrorCategory::UnknownReference => "unknown-reference",
            ErrorCategory::KindMismatch => "kind-mismatch",
            ErrorCategory::DuplicateId => "duplicate-id",
            ErrorCategory::DuplicateAlternative => "duplicate-alternative",
            ErrorCategory::Partition => "partition",
            ErrorCategory::Coverage => "coverage",
            ErrorCategory::InvalidValue => "invalid-value",
        }
    }
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A broken task invariant, as reported by [`crate::validate_task`].
#[derive(Debug, Clone, PartialEq, Error, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    #[error("attribute ids must be positive")]
    InvalidAttributeId,
    #[error("attribute id {attribute} declared more than once")]
    DuplicateAttributeId { attribute: AttributeId },
    #[error("attribute {attribute} is {kind} but has polarity {polarity}")]
    PolarityMismatch {
        attribute: AttributeId,
        kind: AttributeKind,
        polarity: Polarity,
    },
    #[error("{context} references undeclared attribute {attribute}")]
    UnknownAttribute { context: String, attribute: AttributeId },
    #[error("threshold on attribute {attribute} is {found} but the attribute is {expected}")]
    ThresholdKindMismatch {
        attribute: AttributeId,
        expected: AttributeKind,
        found: AttributeKind,
    },
    #[error("attribute {attribute} has more than one threshold")]
    DuplicateThreshold { attribute: AttributeId },
    #[error("basic attribute {attribute} has no threshold")]
    MissingThreshold { attribute: AttributeId },
    #[error("threshold on attribute {attribute}, which is not a basic attribute")]
    ThresholdOutsideBasic { attribute: AttributeId },
    #[error("dominance partition has no levels")]
    EmptyPartition,
    #[error("dominance level {level} is empty")]
    EmptyLevel { level: usize },
    #[error("attribute {attribute} appears in dominance levels {first} and {second}")]
    OverlappingLevels {
        attribute: AttributeId,
        first: usize,
        second: usize,
    },
    #[error("dominance level {level} lists attribute {attribute} more than once")]
    RepeatedInLevel { level: usize, attribute: AttributeId },
    #[error("basic ids list attribute {attribute} more than once")]
    RepeatedBasicId { attribute: AttributeId },
    #[error("attribute {attribute} is neither basic nor in a dominance level")]
    AttributeNotCovered { attribute: AttributeId },
    #[error("aspiration on attribute {attribute}, which is not in the top dominance level")]
    AspirationOutsideTopLevel { attribute: AttributeId },
    #[error("alternative id {alternative:?} used more than once")]
    DuplicateAlternativeId { alternative: String },
    #[error("alternative {alternative:?} has no value for attribute {attribute}")]
    MissingValue {
        alternative: String,
        attribute: AttributeId,
    },
    #[error("alternative {alternative:?} gives a {found} value for {expected} attribute {attribute}")]
    ValueKindMismatch {
        alternative: String,
        attribute: AttributeId,
        expected: AttributeKind,
        found: AttributeKind,
    },
    #[error("alternatives {first:?} and {second:?} are completely equal on every attribute")]
    IdenticalAlternatives { first: String, second: String },
    #[error("{context}: {detail}")]
    Malformed { context: String, detail: String },
}

impl Violation {
    pub fn category(&self) -> ErrorCategory {
        use Violation::*;
        match self {
            InvalidAttributeId | Malformed { .. } | PolarityMismatch { .. } => ErrorCategory::InvalidValue,
            DuplicateAttributeId { .. }
            | DuplicateAlternativeId { .. }
            | DuplicateThreshold { .. }
            | RepeatedBasicId { .. } => ErrorCategory::DuplicateId,
            UnknownAttribute { .. } => ErrorCategory::UnknownReference,
            ThresholdKindMismatch { .. } | ValueKindMismatch { .. } => ErrorCategory::KindMismatch,
            MissingThreshold { .. }
            | ThresholdOutsideBasic { .. }
            | AttributeNotCovered { .. }
            | MissingValue { .. } => ErrorCategory::Coverage,
            EmptyPartition
            | EmptyLevel { .. }
            | OverlappingLevels { .. }
            | RepeatedInLevel { .. }
            | AspirationOutsideTopLevel { .. } => ErrorCategory::Partition,
            IdenticalAlternatives { .. } => ErrorCategory::DuplicateAlternative,
        }
    }
}

/// Misuse of the comparison primitives: values or predicates of different kinds.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("cannot compare a {left} value with a {right} value")]
    KindMismatch { left: AttributeKind, right: AttributeKind },
    #[error("unknown ordinal label {0:?}")]
    UnknownLabel(String),
}
