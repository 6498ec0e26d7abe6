//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use ladder_cli::BATCH_SHAPE;
use ladder_core::baselines::{predict, pt_value, pt_weight, CompareConfig, Prediction, PtParams, Theory};
use ladder_core::oracle::{random_task_within, rescaled, shuffled, ValueMix};
use ladder_core::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASE_TIME_LIMIT: Duration = Duration::from_secs(1);
const SWEEP_TIME_LIMIT: Duration = Duration::from_secs(10);
const SWEEP_SIZE: u64 = 1000;
const MIN_TRIALS: usize = 200;
const PT_VALUE_TOLERANCE: f64 = 1e-6;
const ROUND_TRIP_GENERATED: u64 = 100;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
}

fn fixture(name: &str) -> DecisionTask {
    parse_scenario(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

fn ladder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ladder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1. Each case fixture decides as observed, with the right eliminations.
fn case_fixtures() -> Check {
    let cheapest_legal = {
        let t = fixture("case3");
        t.alternatives
            .iter()
            .filter(|a| a.values[&1] == AttributeValue::category("legal"))
            .min_by(|a, b| {
                a.values[&2]
                    .bounds()
                    .unwrap()
                    .0
                    .total_cmp(&b.values[&2].bounds().unwrap().0)
            })
            .unwrap()
            .id
            .clone()
    };
    let expected: [(&str, String, &[&str]); 4] = [
        ("case1", "m1".into(), &["eliminated m2 on attribute 5"]),
        ("case2", "m3".into(), &["eliminated m1 on attribute 1"]),
        ("case3", cheapest_legal, &["eliminated site-3 on attribute 1"]),
        ("case4", "w1".into(), &[]),
    ];
    let start = Instant::now();
    let mut outputs = Vec::new();
    for (name, _, _) in &expected {
        outputs.push(ladder(&["decide", fixture_path(name).to_str().unwrap()]));
    }
    let elapsed = start.elapsed();
    for ((name, chosen, elims), o) in expected.iter().zip(&outputs) {
        let text = String::from_utf8_lossy(&o.stdout);
        ensure(o.status.code() == Some(0), || {
            format!("{name}: exit {:?}", o.status.code())
        })?;
        ensure(text.lines().any(|l| l == format!("Chosen: {chosen}")), || {
            format!("{name}: expected {chosen}\n{text}")
        })?;
        let found = text.matches("eliminated ").count();
        ensure(found == elims.len(), || {
            format!("{name}: {found} eliminations, expected {}", elims.len())
        })?;
        for e in *elims {
            ensure(text.contains(e), || format!("{name}: missing {e:?}"))?;
        }
    }
    ensure(elapsed < CASE_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("m1, m3, site-2, w1 in {elapsed:.0?}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cell {
    Correct,
    Wrong,
    Undecidable,
    Inapplicable,
}

fn cell(p: &Prediction, observed: &str) -> Cell {
    match p {
        Prediction::Chosen(id) if id == observed => Cell::Correct,
        Prediction::Chosen(_) | Prediction::NoChoice(_) => Cell::Wrong,
        Prediction::Undecidable => Cell::Undecidable,
        Prediction::Inapplicable => Cell::Inapplicable,
    }
}

fn parse_row(text: &str, theory: &str) -> Option<Prediction> {
    let value = text.lines().find_map(|l| l.strip_prefix(&format!("{theory}: ")))?;
    Some(match value {
        "undecidable" => Prediction::Undecidable,
        "inapplicable" => Prediction::Inapplicable,
        id => Prediction::Chosen(id.to_string()),
    })
}

// 2. The three-theory comparison grid over the four cases.
fn comparison_grid() -> Check {
    use Cell::*;
    let observed = ["m1", "m3", "site-2", "w1"];
    let expected = [
        [Correct, Correct, Correct, Correct],
        [Correct, Wrong, Inapplicable, Inapplicable],
        [Undecidable, Undecidable, Correct, Correct],
    ];
    let invocations: [&[&str]; 4] = [
        &["--theories", "lt,pt,it", "--pt-risk-attr", "5"],
        &["--theories", "lt,pt,it", "--pt-risk-attr", "5"],
        &["--theories", "lt,it", "--it-profit-attr", "2"],
        &["--theories", "lt,it", "--it-profit-attr", "5"],
    ];
    let mut grid = [[Undecidable; 4]; 3];
    for (c, flags) in invocations.iter().enumerate() {
        let name = format!("case{}", c + 1);
        let path = fixture_path(&name);
        let mut args = vec!["compare", path.to_str().unwrap()];
        args.extend_from_slice(flags);
        let o = ladder(&args);
        let text = String::from_utf8_lossy(&o.stdout).to_string();
        ensure(o.status.code() == Some(0), || {
            format!("{name}: exit {:?}", o.status.code())
        })?;
        for (t, theory) in Theory::ALL.iter().enumerate() {
            let p = match parse_row(&text, theory.as_str()) {
                Some(p) => p,
                // no risk designation exists for this task
                None => predict(&fixture(&name), *theory, &CompareConfig::default()).map_err(|e| e.to_string())?,
            };
            grid[t][c] = cell(&p, observed[c]);
        }
    }
    ensure(grid == expected, || format!("grid {grid:?}"))?;
    Ok("LT 4/4, PT right/wrong/inapplicable x2, IT undecidable x2/right x2".into())
}

// 3. Termination bound and uniqueness on total-order tasks.
fn termination_and_uniqueness() -> Check {
    let start = Instant::now();
    let mut conditioned = 0;
    for seed in 0..SWEEP_SIZE {
        let task = random_task_within(seed, BATCH_SHAPE, &ValueMix::TOTAL_ORDER);
        ensure(validate_task(&task).is_empty(), || {
            format!("seed {seed}: generated task invalid")
        })?;
        let feasible = psp(&task).feasible;
        let out = lsp(&task, &feasible, DominanceMode::Global);
        let l = task.partition.level_count();
        ensure(out.trace.len() <= l, || {
            format!("seed {seed}: trace {} > L = {l}", out.trace.len())
        })?;
        let dominator_everywhere = feasible.len() >= 2 && out.trace.iter().all(|rec| rec.survivors_after.len() == 1);
        if dominator_everywhere {
            conditioned += 1;
            let unique = matches!(&out.verdict, Verdict::Chosen(id) if feasible.contains(id));
            ensure(unique, || format!("seed {seed}: {}", out.verdict))?;
        }
        let u = lsp(&task, &feasible, DominanceMode::Undominated);
        ensure(u.trace.len() <= l, || {
            format!("seed {seed}: undominated trace too long")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SWEEP_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    ensure(conditioned > 0, || "no run met the dominator condition".into())?;
    Ok(format!(
        "{SWEEP_SIZE} tasks, {conditioned} with a dominator at every level, {elapsed:.0?}"
    ))
}

// 4. Engine and oracle agree on the same sweep, through the batch command.
fn oracle_equivalence() -> Check {
    let count = SWEEP_SIZE.to_string();
    let mut lines = Vec::new();
    for values in ["total-order", "all"] {
        let o = ladder(&["batch", "--seed", "0", "--count", &count, "--values", values]);
        let text = String::from_utf8_lossy(&o.stdout).trim().to_string();
        ensure(o.status.code() == Some(0), || {
            format!("{values}: exit {:?}: {text}", o.status.code())
        })?;
        ensure(text == format!("{SWEEP_SIZE}/{SWEEP_SIZE} agree"), || {
            format!("{values}: {text}")
        })?;
        lines.push(format!("{values} {text}"));
    }
    Ok(lines.join(", "))
}

fn random_value(rng: &mut ChaCha8Rng, kind: AttributeKind) -> AttributeValue {
    match kind {
        AttributeKind::Numeric => match rng.gen_range(0..3) {
            0 => AttributeValue::Crisp(rng.gen_range(0..6) as f64),
            1 => {
                let lo = rng.gen_range(0..6);
                AttributeValue::interval(lo as f64, rng.gen_range(lo..7) as f64)
            }
            _ => AttributeValue::AtLeast(rng.gen_range(0..6) as f64),
        },
        AttributeKind::Ordinal => AttributeValue::Ordinal(rng.gen_range(1..=5)),
        AttributeKind::Categorical => AttributeValue::category(["a", "b", "c"][rng.gen_range(0..3)]),
    }
}

fn at_least_as_good(o: PartialOrdering) -> bool {
    matches!(o, PartialOrdering::Better | PartialOrdering::Equal)
}

fn trial_tasks(offset: u64) -> impl Iterator<Item = DecisionTask> {
    (0..MIN_TRIALS as u64 + 56).map(move |i| {
        let mix = if i % 2 == 0 {
            ValueMix::ALL
        } else {
            ValueMix::TOTAL_ORDER
        };
        random_task_within(offset + i, BATCH_SHAPE, &mix)
    })
}

// 5. Invariant suites, each over at least MIN_TRIALS randomized trials.
fn invariant_suites() -> Check {
    let mut counts: Vec<(&str, usize)> = Vec::new();

    let mut n = 0;
    for task in trial_tasks(10_000) {
        let r = psp(&task);
        let ids = task.alternative_ids();
        ensure(r.feasible.iter().all(|id| ids.contains(id)), || {
            format!("{}: feasible not a subset", task.task_id)
        })?;
        ensure(psp(&task.restricted_to(&r.feasible)).feasible == r.feasible, || {
            format!("{}: sifting not idempotent", task.task_id)
        })?;
        n += 1;
    }
    counts.push(("sift", n));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut n = 0;
    for _ in 0..MIN_TRIALS * 5 {
        let kind = [
            AttributeKind::Numeric,
            AttributeKind::Ordinal,
            AttributeKind::Categorical,
        ][rng.gen_range(0..3)];
        let polarity = match kind {
            AttributeKind::Categorical => Polarity::None,
            _ => [Polarity::Cost, Polarity::Benefit][rng.gen_range(0..2)],
        };
        let (a, b, c) = (
            random_value(&mut rng, kind),
            random_value(&mut rng, kind),
            random_value(&mut rng, kind),
        );
        let ab = compare_values(&a, &b, polarity).unwrap();
        let ba = compare_values(&b, &a, polarity).unwrap();
        ensure(ab == ba.reverse(), || format!("{a} vs {b}: {ab:?} / {ba:?}"))?;
        let bc = compare_values(&b, &c, polarity).unwrap();
        let ac = compare_values(&a, &c, polarity).unwrap();
        if at_least_as_good(ab) && at_least_as_good(bc) {
            ensure(at_least_as_good(ac), || format!("{a} >= {b} >= {c} but {ac:?}"))?;
        }
        n += 1;
    }
    for task in trial_tasks(20_000) {
        for level in &task.partition.levels {
            for s in &task.alternatives {
                for t in &task.alternatives {
                    if s.id == t.id {
                        continue;
                    }
                    let st = dominates(s, t, level, &task);
                    ensure(!(st && dominates(t, s, level, &task)), || {
                        format!("{}: mutual dominance", task.task_id)
                    })?;
                    for u in &task.alternatives {
                        if st && u.id != s.id && dominates(t, u, level, &task) {
                            ensure(dominates(s, u, level, &task), || {
                                format!("{}: not transitive", task.task_id)
                            })?;
                        }
                    }
                }
            }
        }
        n += 1;
    }
    counts.push(("dominance order", n));

    let mut n = 0;
    for task in trial_tasks(30_000) {
        let all = task.alternative_ids();
        for level in &task.partition.levels {
            let g = dominant_set(&all, level, DominanceMode::Global, &task);
            ensure(all.len() < 2 || g.len() <= 1, || {
                format!("{}: {} global dominators", task.task_id, g.len())
            })?;
        }
        n += 1;
    }
    counts.push(("global cardinality", n));

    let mut n = 0;
    for task in trial_tasks(40_000) {
        let feasible = psp(&task).feasible;
        for mode in [DominanceMode::Global, DominanceMode::Undominated] {
            let out = lsp(&task, &feasible, mode);
            let mut current = feasible.clone();
            for rec in &out.trace {
                ensure(rec.survivors_before == current, || {
                    format!("{}: level {} input", task.task_id, rec.r)
                })?;
                let before: BTreeSet<_> = rec.survivors_before.iter().collect();
                ensure(rec.survivors_after.iter().all(|id| before.contains(id)), || {
                    format!("{}: level {} grew", task.task_id, rec.r)
                })?;
                current = rec.survivors_after.clone();
            }
        }
        n += 1;
    }
    counts.push(("survivor monotonicity", n));

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut n = 0;
    for task in trial_tasks(50_000) {
        let (a, b, c) = (
            rng.gen_range(0.0..2.0),
            rng.gen_range(0.1..5.0),
            rng.gen_range(-50.0..50.0),
        );
        let g = move |x: f64| a * x * x * x + b * x + c;
        for mode in [DominanceMode::Global, DominanceMode::Undominated] {
            let base = evaluate(&task, mode).unwrap().outcome.verdict;
            for attr in task.attributes.iter().filter(|at| at.kind == AttributeKind::Numeric) {
                let moved = evaluate(&rescaled(&task, attr.id, &g), mode).unwrap().outcome.verdict;
                ensure(moved == base, || {
                    format!("{}: rescaling {} changed {base} to {moved}", task.task_id, attr.id)
                })?;
            }
        }
        n += 1;
    }
    counts.push(("rescaling", n));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut n = 0;
    for task in trial_tasks(60_000) {
        let mut order = task.alternatives.clone();
        order.shuffle(&mut rng);
        let by_hand = DecisionTask {
            alternatives: order,
            ..task.clone()
        };
        let by_oracle = shuffled(&task, rng.gen());
        for mode in [DominanceMode::Global, DominanceMode::Undominated] {
            let base = evaluate(&task, mode).unwrap().outcome.verdict;
            for permuted in [&by_hand, &by_oracle] {
                let moved = evaluate(permuted, mode).unwrap().outcome.verdict;
                ensure(moved == base, || {
                    format!("{}: permutation changed {base} to {moved}", task.task_id)
                })?;
            }
        }
        n += 1;
    }
    counts.push(("permutation", n));

    let short = counts.iter().find(|(_, n)| *n < MIN_TRIALS);
    ensure(short.is_none(), || format!("too few trials: {short:?}"))?;
    Ok(counts
        .iter()
        .map(|(name, n)| format!("{name} {n}"))
        .collect::<Vec<_>>()
        .join(", "))
}

// 6. Prospect-theory numerics.
fn baseline_numerics() -> Check {
    let p = PtParams::default();
    let independent = (0.88 * 100f64.ln()).exp();
    let got = pt_value(100.0, &p);
    ensure((got - independent).abs() <= PT_VALUE_TOLERANCE, || {
        format!("pt_value(100) = {got}, expected {independent}")
    })?;
    for gamma in [0.3, 0.61, 0.69, 1.0, 1.5] {
        ensure(pt_weight(0.0, gamma) == 0.0, || format!("w(0) != 0 at gamma {gamma}"))?;
        ensure(pt_weight(1.0, gamma) == 1.0, || format!("w(1) != 1 at gamma {gamma}"))?;
    }
    for k in 0..=1000 {
        let prob = k as f64 / 1000.0;
        ensure(pt_weight(prob, 1.0) == prob, || {
            format!("w({prob}) != {prob} at gamma 1")
        })?;
    }
    Ok(format!(
        "pt_value(100) = {got:.9}, endpoints exact, gamma=1 grid of 1001 exact"
    ))
}

// 7. Parse and serialize are inverse on the fixtures and on generated tasks.
fn round_trip() -> Check {
    let mut tasks: Vec<DecisionTask> = (1..=4).map(|i| fixture(&format!("case{i}"))).collect();
    tasks.extend((0..ROUND_TRIP_GENERATED).map(|s| random_task_within(70_000 + s, BATCH_SHAPE, &ValueMix::ALL)));
    for task in &tasks {
        let back = parse_scenario(&serialize_task(task)).map_err(|e| format!("{}: {e}", task.task_id))?;
        ensure(back.alternatives.len() == task.alternatives.len(), || {
            format!("{}: alternatives lost", task.task_id)
        })?;
        for (a, b) in task.alternatives.iter().zip(&back.alternatives) {
            ensure(a.id == b.id && identical(a, b, task), || {
                format!("{}: {} changed", task.task_id, a.id)
            })?;
        }
        ensure(&back == task, || format!("{}: task changed", task.task_id))?;
    }
    Ok(format!("4 fixtures + {ROUND_TRIP_GENERATED} generated tasks"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("case fixtures", case_fixtures),
        ("comparison grid", comparison_grid),
        ("termination and uniqueness", termination_and_uniqueness),
        ("oracle equivalence", oracle_equivalence),
        ("invariant suites", invariant_suites),
        ("baseline numerics", baseline_numerics),
        ("format round trip", round_trip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
