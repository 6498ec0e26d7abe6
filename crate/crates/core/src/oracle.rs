//! Brute-force reference implementations and a seeded task generator.
//!
//! Nothing in this module calls into `value_order`, `sift` or `ladder`: value
//! comparison, threshold tests, sifting and the ladder search are re-derived
//! here with plain nested loops so the two paths can be checked against each
//! other.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ladder::DominanceMode;
use crate::model::*;

fn ends(v: &AttributeValue) -> Option<(f64, f64)> {
    match v {
        AttributeValue::Crisp(x) => Some((*x, *x)),
        AttributeValue::Interval { lo, hi } => Some((*lo, *hi)),
        AttributeValue::AtLeast(x) => Some((*x, f64::INFINITY)),
        _ => None,
    }
}

/// Same position in the order (not necessarily the same representation).
fn level_with(a: &AttributeValue, b: &AttributeValue) -> bool {
    match (a, b) {
        (AttributeValue::Ordinal(x), AttributeValue::Ordinal(y)) => x == y,
        (AttributeValue::Category(x), AttributeValue::Category(y)) => x == y,
        _ => match (ends(a), ends(b)) {
            (Some(p), Some(q)) => p.0 == q.0 && p.1 == q.1,
            _ => false,
        },
    }
}

fn strictly_better(a: &AttributeValue, b: &AttributeValue, polarity: Polarity) -> bool {
    let (x, y) = match polarity {
        Polarity::Benefit => (a, b),
        Polarity::Cost => (b, a),
        Polarity::None => return false,
    };
    // "x above y" in the larger-is-better sense
    match (x, y) {
        (AttributeValue::Ordinal(p), AttributeValue::Ordinal(q)) => p > q,
        _ => match (ends(x), ends(y)) {
            (Some(p), Some(q)) => p.0 >= q.0 && p.1 >= q.1 && (p.0 > q.0 || p.1 > q.1),
            _ => false,
        },
    }
}

fn no_worse(a: &AttributeValue, b: &AttributeValue, polarity: Polarity) -> bool {
    level_with(a, b) || strictly_better(a, b, polarity)
}

fn passes(v: &AttributeValue, p: &Predicate) -> bool {
    match (p, v) {
        (Predicate::Max(c), _) => ends(v).is_some_and(|(lo, _)| lo <= *c),
        (Predicate::Min(c), _) => ends(v).is_some_and(|(_, hi)| hi >= *c),
        (Predicate::MinLevel(l), AttributeValue::Ordinal(x)) => x >= l,
        (Predicate::MaxLevel(l), AttributeValue::Ordinal(x)) => x <= l,
        (Predicate::Allowed(set), AttributeValue::Category(c)) => set.contains(c),
        _ => false,
    }
}

fn find<'a>(task: &'a DecisionTask, id: &str) -> Option<&'a Alternative> {
    task.alternatives.iter().find(|a| a.id == id)
}

fn polarity_of(task: &DecisionTask, id: AttributeId) -> Polarity {
    for a in &task.attributes {
        if a.id == id {
            return a.polarity;
        }
    }
    Polarity::None
}

/// Dominant set by exhaustive pairwise comparison.
pub fn brute_force_dominant(
    candidates: &[String],
    attrs: &BTreeSet<AttributeId>,
    mode: DominanceMode,
    task: &DecisionTask,
) -> Vec<String> {
    let alts: Vec<&Alternative> = candidates.iter().filter_map(|id| find(task, id)).collect();
    let mut out = Vec::new();
    for (i, s) in alts.iter().enumerate() {
        let keep = match mode {
            DominanceMode::Undominated => {
                let mut dominated = false;
                for (j, t) in alts.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let mut all_no_worse = true;
                    let mut any_better = false;
                    for k in attrs {
                        let (Some(tv), Some(sv)) = (t.values.get(k), s.values.get(k)) else {
                            all_no_worse = false;
                            continue;
                        };
                        let pol = polarity_of(task, *k);
                        if !no_worse(tv, sv, pol) {
                            all_no_worse = false;
                        }
                        if strictly_better(tv, sv, pol) {
                            any_better = true;
                        }
                    }
                    if all_no_worse && any_better {
                        dominated = true;
                    }
                }
                !dominated
            }
            DominanceMode::Global => {
                let mut weakly_everywhere = true;
                let mut some_strict_attr = false;
                for k in attrs {
                    let pol = polarity_of(task, *k);
                    let mut strict_vs_all = true;
                    for (j, t) in alts.iter().enumerate() {
                        if i == j {
                            continue;
                        }
                        match (s.values.get(k), t.values.get(k)) {
                            (Some(sv), Some(tv)) => {
                                if !no_worse(sv, tv, pol) {
                                    weakly_everywhere = false;
                                }
                                if !strictly_better(sv, tv, pol) {
                                    strict_vs_all = false;
                                }
                            }
                            _ => {
                                weakly_everywhere = false;
                                strict_vs_all = false;
                            }
                        }
                    }
                    if strict_vs_all {
                        some_strict_attr = true;
                    }
                }
                weakly_everywhere && (alts.len() == 1 || some_strict_attr)
            }
        };
        if keep {
            out.push(s.id.clone());
        }
    }
    out
}

/// Sifting as a literal fixed-point loop: keep removing failing alternatives
/// until a sweep removes nothing.
pub fn brute_force_sift(task: &DecisionTask) -> Vec<String> {
    let mut remaining: Vec<&Alternative> = task.alternatives.iter().collect();
    loop {
        let before = remaining.len();
        remaining.retain(|alt| {
            task.thresholds
                .iter()
                .all(|t| alt.values.get(&t.attribute).is_some_and(|v| passes(v, &t.predicate)))
        });
        if remaining.len() == before {
            break;
        }
    }
    remaining.iter().map(|a| a.id.clone()).collect()
}

/// Full pipeline, recomputed from scratch.
pub fn brute_force_lt(task: &DecisionTask, mode: DominanceMode) -> Verdict {
    let feasible = brute_force_sift(task);
    if feasible.is_empty() {
        return Verdict::Abstain;
    }
    if feasible.len() == 1 {
        let s = find(task, &feasible[0]).expect("feasible ids come from the task");
        let ok = match &task.aspiration {
            None => true,
            Some(list) => list
                .iter()
                .all(|t| s.values.get(&t.attribute).is_some_and(|v| passes(v, &t.predicate))),
        };
        return if ok {
            Verdict::Chosen(s.id.clone())
        } else {
            Verdict::Abstain
        };
    }
    let mut survivors = feasible;
    let mut r = task.partition.levels.len();
    while r >= 1 {
        survivors = brute_force_dominant(&survivors, &task.partition.levels[r - 1], mode, task);
        if survivors.is_empty() {
            return Verdict::Repartition;
        }
        if survivors.len() == 1 {
            return Verdict::Chosen(survivors.remove(0));
        }
        r -= 1;
    }
    Verdict::NoUniqueChoice
}

/// Relative weights of value kinds in generated tasks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueMix {
    pub crisp: u32,
    pub interval: u32,
    pub at_least: u32,
    pub ordinal: u32,
    pub categorical: u32,
}

impl ValueMix {
    pub const ALL: ValueMix = ValueMix {
        crisp: 3,
        interval: 2,
        at_least: 1,
        ordinal: 3,
        categorical: 1,
    };
    /// Crisp and ordinal values only: every attribute is totally ordered.
    pub const TOTAL_ORDER: ValueMix = ValueMix {
        crisp: 1,
        interval: 0,
        at_least: 0,
        ordinal: 1,
        categorical: 0,
    };
}

impl Default for ValueMix {
    fn default() -> Self {
        ValueMix::ALL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaskShape {
    pub alternatives: usize,
    pub attributes: usize,
    pub levels: usize,
}

impl TaskShape {
    pub const fn new(alternatives: usize, attributes: usize, levels: usize) -> Self {
        TaskShape {
            alternatives,
            attributes,
            levels,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Flavor {
    Crisp,
    Interval,
    AtLeast,
    Ordinal,
    Categorical,
}

const CATEGORIES: [&str; 3] = ["red", "green", "blue"];

fn pick_flavor(rng: &mut ChaCha8Rng, mix: &ValueMix) -> Flavor {
    let weights = [
        (Flavor::Crisp, mix.crisp),
        (Flavor::Interval, mix.interval),
        (Flavor::AtLeast, mix.at_least),
        (Flavor::Ordinal, mix.ordinal),
        (Flavor::Categorical, mix.categorical),
    ];
    let total: u32 = weights.iter().map(|(_, w)| w).sum();
    assert!(total > 0, "value mix must have a positive weight");
    let mut roll = rng.gen_range(0..total);
    for (f, w) in weights {
        if roll < w {
            return f;
        }
        roll -= w;
    }
    unreachable!()
}

fn random_value(rng: &mut ChaCha8Rng, flavor: Flavor) -> AttributeValue {
    let small = |rng: &mut ChaCha8Rng| rng.gen_range(0..=4) as f64;
    match flavor {
        Flavor::Crisp => AttributeValue::Crisp(small(rng)),
        Flavor::Interval if rng.gen_bool(0.5) => {
            let lo = small(rng);
            AttributeValue::Interval {
                lo,
                hi: lo + rng.gen_range(0..=2) as f64,
            }
        }
        Flavor::Interval => AttributeValue::Crisp(small(rng)),
        Flavor::AtLeast if rng.gen_bool(0.7) => AttributeValue::AtLeast(small(rng)),
        Flavor::AtLeast => AttributeValue::Crisp(small(rng)),
        Flavor::Ordinal => AttributeValue::Ordinal(rng.gen_range(1..=5)),
        Flavor::Categorical => AttributeValue::Category(CATEGORIES[rng.gen_range(0..CATEGORIES.len())].to_string()),
    }
}

fn random_predicate(rng: &mut ChaCha8Rng, attr: &Attribute) -> Predicate {
    match (attr.kind, attr.polarity) {
        (AttributeKind::Numeric, Polarity::Cost) => Predicate::Max(rng.gen_range(2..=5) as f64),
        (AttributeKind::Numeric, _) => Predicate::Min(rng.gen_range(0..=2) as f64),
        (AttributeKind::Ordinal, Polarity::Cost) => Predicate::MaxLevel(rng.gen_range(3..=5)),
        (AttributeKind::Ordinal, _) => Predicate::MinLevel(rng.gen_range(1..=3)),
        (AttributeKind::Categorical, _) => {
            let mut labels: Vec<&str> = CATEGORIES.to_vec();
            labels.shuffle(rng);
            let keep = rng.gen_range(2..=CATEGORIES.len());
            Predicate::Allowed(labels[..keep].iter().map(|s| s.to_string()).collect())
        }
    }
}

/// Deterministic random task. The result always passes [`validate_task`];
/// alternatives that would duplicate an earlier one are redrawn, and in the
/// rare case the value space is too small the task ends up with fewer
/// alternatives than requested.
pub fn random_task(seed: u64, shape: TaskShape, mix: &ValueMix) -> DecisionTask {
    assert!(
        shape.alternatives > 0 && shape.attributes > 0 && shape.levels > 0,
        "dimensions must be positive"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut flavors = Vec::with_capacity(shape.attributes);
    let mut attributes = Vec::with_capacity(shape.attributes);
    for i in 0..shape.attributes {
        let flavor = pick_flavor(&mut rng, mix);
        let id = (i + 1) as AttributeId;
        let polarity = if rng.gen_bool(0.5) {
            Polarity::Cost
        } else {
            Polarity::Benefit
        };
        let attr = match flavor {
            Flavor::Crisp | Flavor::Interval | Flavor::AtLeast => {
                Attribute::new(id, format!("x{id}"), AttributeKind::Numeric, polarity)
            }
            Flavor::Ordinal => Attribute::new(id, format!("x{id}"), AttributeKind::Ordinal, polarity),
            Flavor::Categorical => Attribute::new(id, format!("x{id}"), AttributeKind::Categorical, Polarity::None),
        };
        flavors.push(flavor);
        attributes.push(attr);
    }

    // dominance attributes split into consecutive non-empty levels
    let mut ids: Vec<AttributeId> = attributes.iter().map(|a| a.id).collect();
    ids.shuffle(&mut rng);
    let n_beta = rng.gen_range(1..=ids.len());
    let beta = &ids[..n_beta];
    let n_levels = shape.levels.min(n_beta);
    let mut cuts: Vec<usize> = (1..n_beta).collect();
    cuts.shuffle(&mut rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(n_levels - 1).collect();
    cuts.sort_unstable();
    let mut levels = Vec::with_capacity(n_levels);
    let mut start = 0;
    for end in cuts.into_iter().chain(std::iter::once(n_beta)) {
        levels.push(beta[start..end].iter().copied().collect::<BTreeSet<_>>());
        start = end;
    }

    let mut basic_ids: BTreeSet<AttributeId> = ids[n_beta..].iter().copied().collect();
    for id in beta {
        if rng.gen_bool(0.5) {
            basic_ids.insert(*id);
        }
    }
    let thresholds: Vec<Threshold> = basic_ids
        .iter()
        .map(|id| Threshold::new(*id, random_predicate(&mut rng, &attributes[(*id - 1) as usize])))
        .collect();

    let aspiration = if rng.gen_bool(0.3) {
        let top: Vec<AttributeId> = levels.last().expect("at least one level").iter().copied().collect();
        let n = rng.gen_range(1..=top.len());
        let mut chosen: Vec<AttributeId> = top.choose_multiple(&mut rng, n).copied().collect();
        chosen.sort_unstable();
        Some(
            chosen
                .into_iter()
                .map(|id| Threshold::new(id, random_predicate(&mut rng, &attributes[(id - 1) as usize])))
                .collect(),
        )
    } else {
        None
    };

    let mut task = DecisionTask {
        task_id: format!("random-{seed}"),
        attributes,
        basic_ids,
        thresholds,
        partition: DominancePartition::new(levels),
        aspiration,
        alternatives: Vec::new(),
    };

    for n in 0..shape.alternatives {
        for _attempt in 0..64 {
            let values = task
                .attributes
                .iter()
                .zip(&flavors)
                .map(|(a, f)| (a.id, random_value(&mut rng, *f)))
                .collect();
            let alt = Alternative {
                id: format!("s{}", n + 1),
                values,
            };
            if !task.alternatives.iter().any(|other| identical(other, &alt, &task)) {
                task.alternatives.push(alt);
                break;
            }
        }
    }
    task
}

/// Like [`random_task`], with each dimension drawn from `1..=max` by the seed.
pub fn random_task_within(seed: u64, max: TaskShape, mix: &ValueMix) -> DecisionTask {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
    let shape = TaskShape {
        alternatives: rng.gen_range(1..=max.alternatives),
        attributes: rng.gen_range(1..=max.attributes),
        levels: rng.gen_range(1..=max.levels),
    };
    random_task(seed, shape, mix)
}

/// The task with its alternatives in a seeded random order.
pub fn shuffled(task: &DecisionTask, seed: u64) -> DecisionTask {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = task.clone();
    t.alternatives.shuffle(&mut rng);
    t
}

/// Applies `g` (assumed strictly increasing) to every bound of numeric
/// attribute `attr`: values, thresholds and aspirations.
pub fn rescaled(task: &DecisionTask, attr: AttributeId, g: &dyn Fn(f64) -> f64) -> DecisionTask {
    let mut t = task.clone();
    let map_value = |v: &mut AttributeValue| match v {
        AttributeValue::Crisp(x) | AttributeValue::AtLeast(x) => *x = g(*x),
        AttributeValue::Interval { lo, hi } => {
            *lo = g(*lo);
            *hi = g(*hi);
        }
        _ => {}
    };
    for alt in &mut t.alternatives {
        if let Some(v) = alt.values.get_mut(&attr) {
            map_value(v);
        }
    }
    let map_threshold = |th: &mut Threshold| {
        if th.attribute == attr {
            if let Predicate::Max(c) | Predicate::Min(c) = &mut th.predicate {
                *c = g(*c);
            }
        }
    };
    t.thresholds.iter_mut().for_each(map_threshold);
    if let Some(list) = &mut t.aspiration {
        list.iter_mut().for_each(map_threshold);
    }
    t
}
