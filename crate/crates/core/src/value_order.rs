//! Comparison of attribute values under a polarity, and threshold tests.
//!
//! Numeric values are ordered through their `(lo, hi)` bounds: crisp values are
//! degenerate intervals and `at_least` values have an infinite upper bound. Two
//! bound pairs are ordered componentwise, so crossing intervals are
//! incomparable. Categories are never strictly ordered.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::ValueError;
use crate::model::{AttributeValue, Polarity, Predicate, Threshold};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartialOrdering {
    Better,
    Worse,
    Equal,
    Incomparable,
}

impl PartialOrdering {
    pub fn reverse(self) -> Self {
        match self {
            PartialOrdering::Better => PartialOrdering::Worse,
            PartialOrdering::Worse => PartialOrdering::Better,
            other => other,
        }
    }

    /// Better or Equal.
    pub fn is_at_least_as_good(self) -> bool {
        matches!(self, PartialOrdering::Better | PartialOrdering::Equal)
    }

    fn from_ordering(ord: Ordering) -> Self {
        match ord {
            Ordering::Greater => PartialOrdering::Better,
            Ordering::Less => PartialOrdering::Worse,
            Ordering::Equal => PartialOrdering::Equal,
        }
    }
}

/// Order of `a` relative to `b` when larger is better.
fn benefit_order(a: &AttributeValue, b: &AttributeValue) -> Result<PartialOrdering, ValueError> {
    match (a, b) {
        (AttributeValue::Ordinal(x), AttributeValue::Ordinal(y)) => Ok(PartialOrdering::from_ordering(x.cmp(y))),
        (AttributeValue::Category(x), AttributeValue::Category(y)) => Ok(if x == y {
            PartialOrdering::Equal
        } else {
            PartialOrdering::Incomparable
        }),
        _ => match (a.bounds(), b.bounds()) {
            (Some((alo, ahi)), Some((blo, bhi))) => {
                let lo = alo.partial_cmp(&blo);
                let hi = ahi.partial_cmp(&bhi);
                Ok(match (lo, hi) {
                    (Some(Ordering::Equal), Some(Ordering::Equal)) => PartialOrdering::Equal,
                    (Some(l), Some(h)) if l != Ordering::Less && h != Ordering::Less => PartialOrdering::Better,
                    (Some(l), Some(h)) if l != Ordering::Greater && h != Ordering::Greater => PartialOrdering::Worse,
                    _ => PartialOrdering::Incomparable,
                })
            }
            _ => Err(ValueError::KindMismatch {
                left: a.kind(),
                right: b.kind(),
            }),
        },
    }
}

/// Compares `a` against `b` for an attribute with the given polarity.
///
/// Kinds must match (numeric with numeric, ordinal with ordinal, category with
/// category). Under `Polarity::None` only equality is detected.
pub fn compare_values(
    a: &AttributeValue,
    b: &AttributeValue,
    polarity: Polarity,
) -> Result<PartialOrdering, ValueError> {
    let ord = benefit_order(a, b)?;
    Ok(match polarity {
        Polarity::Benefit => ord,
        Polarity::Cost => ord.reverse(),
        Polarity::None => {
            if ord == PartialOrdering::Equal {
                PartialOrdering::Equal
            } else {
                PartialOrdering::Incomparable
            }
        }
    })
}

/// Tests `value` against a threshold using best-case endpoints: an uncertain
/// value passes when some point of its range passes.
pub fn satisfies_threshold(value: &AttributeValue, threshold: &Threshold) -> Result<bool, ValueError> {
    satisfies(value, &threshold.predicate)
}

pub fn satisfies(value: &AttributeValue, predicate: &Predicate) -> Result<bool, ValueError> {
    let mismatch = || ValueError::KindMismatch {
        left: value.kind(),
        right: predicate.kind(),
    };
    match (predicate, value) {
        (Predicate::Max(c), v) => v.bounds().map(|(lo, _)| lo <= *c).ok_or_else(mismatch),
        (Predicate::Min(c), v) => v.bounds().map(|(_, hi)| hi >= *c).ok_or_else(mismatch),
        (Predicate::MinLevel(l), AttributeValue::Ordinal(x)) => Ok(x >= l),
        (Predicate::MaxLevel(l), AttributeValue::Ordinal(x)) => Ok(x <= l),
        (Predicate::Allowed(set), AttributeValue::Category(c)) => Ok(set.contains(c)),
        _ => Err(mismatch()),
    }
}

pub const ORDINAL_LABELS: [&str; 5] = ["very_low", "low", "moderate", "high", "very_high"];

/// Maps a label of the five-level qualitative scale onto 1..=5.
pub fn ordinal_from_label(label: &str) -> Result<u8, ValueError> {
    ORDINAL_LABELS
        .iter()
        .position(|l| *l == label)
        .map(|i| i as u8 + 1)
        .ok_or_else(|| ValueError::UnknownLabel(label.to_string()))
}

pub fn ordinal_label(level: u8) -> Option<&'static str> {
    level
        .checked_sub(1)
        .and_then(|i| ORDINAL_LABELS.get(i as usize))
        .copied()
}
