//! Workloads shared by the engine benchmarks.

use ladder_core::oracle::{random_task, TaskShape, ValueMix};
use ladder_core::DecisionTask;

/// `count` generated tasks of exactly `shape`, seeded from 0.
pub fn workload(count: u64, shape: TaskShape, mix: &ValueMix) -> Vec<DecisionTask> {
    (0..count).map(|seed| random_task(seed, shape, mix)).collect()
}
