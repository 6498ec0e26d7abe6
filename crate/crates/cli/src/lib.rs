//! The `ladder` command: decide, compare, validate and batch.
//!
//! [`run`] takes the argument list and two writers and returns the process
//! exit code, so the whole command can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use ladder_core::baselines::{predict, CompareConfig, Prediction, Theory};
use ladder_core::oracle::{brute_force_lt, random_task_within, TaskShape, ValueMix};
use ladder_core::{
    lsp, outcome_json, parse_scenario, psp, serialize_outcome, AttributeId, DecisionTask, DominanceMode, Elimination,
    ScenarioError, Verdict,
};
use serde::Serialize;

pub const EXIT_CHOSEN: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ABSTAIN: i32 = 2;
pub const EXIT_NO_CHOICE: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

/// Largest generated task used by `batch`.
pub const BATCH_SHAPE: TaskShape = TaskShape::new(6, 5, 3);

#[derive(Debug, Parser)]
#[command(
    name = "ladder",
    version,
    about = "Threshold sifting and ladder search over discrete alternatives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sift a scenario and run the ladder search.
    Decide {
        path: PathBuf,
        #[arg(long, default_value = "global", value_parser = parse_mode)]
        mode: DominanceMode,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the ladder search next to the prospect-theory and image-theory baselines.
    Compare {
        path: PathBuf,
        /// Comma-separated subset of lt, pt, it.
        #[arg(long, required = true, value_delimiter = ',', value_parser = parse_theory)]
        theories: Vec<Theory>,
        /// Risk attribute minimized by the prospect-theory proxy.
        #[arg(long)]
        pt_risk_attr: Option<AttributeId>,
        /// Numeric attribute maximized by image theory's profitability test.
        #[arg(long)]
        it_profit_attr: Option<AttributeId>,
        /// Threshold violations tolerated by image theory's compatibility test.
        #[arg(long, default_value_t = 0)]
        it_budget: usize,
        #[arg(long, default_value = "global", value_parser = parse_mode)]
        mode: DominanceMode,
    },
    /// Parse and validate scenario files, reporting every violation.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Check the engine against the brute-force oracle on generated tasks.
    Batch {
        /// Directory of scenario files to check as well.
        dir: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        /// Value kinds used by the generator.
        #[arg(long, value_enum, default_value_t = Values::All)]
        values: Values,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Values {
    /// Crisp, interval, at-least, ordinal and categorical values.
    All,
    /// Crisp numbers and ordinal levels only.
    TotalOrder,
}

impl Values {
    pub fn mix(self) -> ValueMix {
        match self {
            Values::All => ValueMix::ALL,
            Values::TotalOrder => ValueMix::TOTAL_ORDER,
        }
    }
}

fn parse_mode(s: &str) -> Result<DominanceMode, String> {
    s.parse()
}

fn parse_theory(s: &str) -> Result<Theory, String> {
    s.trim().parse()
}

/// Entry point. Output is collected and written once so that repeated
/// invocations produce byte-identical streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let code = dispatch(args, &mut stdout, &mut stderr);
    let _ = out.write_all(&stdout).and_then(|_| out.flush());
    let _ = err.write_all(&stderr).and_then(|_| err.flush());
    code
}

fn dispatch<I, T>(args: I, out: &mut Vec<u8>, err: &mut Vec<u8>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                EXIT_CHOSEN
            };
        }
    };
    match cli.command {
        Command::Decide { path, mode, json } => cmd_decide(&path, mode, json, out, err),
        Command::Compare {
            path,
            theories,
            pt_risk_attr,
            it_profit_attr,
            it_budget,
            mode,
        } => {
            let cfg = CompareConfig {
                mode,
                pt_risk_attribute: pt_risk_attr,
                it_profit_attribute: it_profit_attr,
                it_budget,
            };
            cmd_compare(&path, &theories, &cfg, out, err)
        }
        Command::Validate { paths } => cmd_validate(&paths, out),
        Command::Batch {
            dir,
            seed,
            count,
            values,
        } => batch(dir.as_deref(), seed, count, &values.mix(), &engine_verdict, out, err),
    }
}

/// Exit code for a ladder verdict.
pub fn verdict_exit_code(verdict: &Verdict) -> i32 {
    match verdict {
        Verdict::Chosen(_) => EXIT_CHOSEN,
        Verdict::Abstain => EXIT_ABSTAIN,
        Verdict::Repartition | Verdict::NoUniqueChoice => EXIT_NO_CHOICE,
    }
}

enum LoadError {
    Io(std::io::Error),
    Scenario(ScenarioError),
}

fn load(path: &Path) -> Result<DecisionTask, LoadError> {
    let text = std::fs::read_to_string(path).map_err(LoadError::Io)?;
    parse_scenario(&text).map_err(LoadError::Scenario)
}

/// One `[category] message` line per problem found in the file.
fn problem_lines(e: &LoadError) -> Vec<String> {
    match e {
        LoadError::Io(io) => vec![format!("[io] {io}")],
        LoadError::Scenario(ScenarioError::Invalid(violations)) if !violations.is_empty() => {
            violations.iter().map(|v| format!("[{}] {v}", v.category())).collect()
        }
        LoadError::Scenario(other) => vec![format!("[{}] {other}", other.category())],
    }
}

fn load_or_report(path: &Path, err: &mut Vec<u8>) -> Option<DecisionTask> {
    match load(path) {
        Ok(task) => Some(task),
        Err(e) => {
            for line in problem_lines(&e) {
                let _ = writeln!(err, "error: {}: {line}", path.display());
            }
            None
        }
    }
}

fn elimination_line(e: &Elimination, task: &DecisionTask) -> String {
    let name = task.attribute(e.attribute).map(|a| a.name.as_str()).unwrap_or("?");
    let value = e
        .value
        .as_ref()
        .map(|v| v.to_string())
        .unwrap_or_else(|| "missing".into());
    format!(
        "eliminated {} on attribute {} ({name}): {value} fails {}",
        e.alternative, e.attribute, e.threshold.predicate
    )
}

#[derive(Serialize)]
struct DecideJson<'a> {
    task_id: &'a str,
    mode: DominanceMode,
    feasible: &'a [String],
    eliminations: &'a [Elimination],
    outcome: serde_json::Value,
}

fn cmd_decide(path: &Path, mode: DominanceMode, json: bool, out: &mut Vec<u8>, err: &mut Vec<u8>) -> i32 {
    let Some(task) = load_or_report(path, err) else {
        return EXIT_ERROR;
    };
    let sift = psp(&task);
    let outcome = lsp(&task, &sift.feasible, mode);
    if json {
        let report = DecideJson {
            task_id: &task.task_id,
            mode,
            feasible: &sift.feasible,
            eliminations: &sift.eliminations,
            outcome: outcome_json(&outcome),
        };
        let text = serde_json::to_string_pretty(&report).expect("report serialization cannot fail");
        let _ = writeln!(out, "{text}");
    } else {
        let _ = writeln!(out, "task {} (mode {})", task.task_id, mode.as_str());
        let _ = writeln!(
            out,
            "sift: {} of {} feasible [{}]",
            sift.feasible.len(),
            task.alternatives.len(),
            sift.feasible.join(",")
        );
        for e in &sift.eliminations {
            let _ = writeln!(out, "  {}", elimination_line(e, &task));
        }
        let _ = write!(out, "{}", serialize_outcome(&outcome));
    }
    verdict_exit_code(&outcome.verdict)
}

/// Short form used in comparison rows: the chosen id, or the kind of non-choice.
pub fn prediction_cell(p: &Prediction) -> String {
    match p {
        Prediction::Chosen(id) => id.clone(),
        Prediction::Undecidable => "undecidable".into(),
        Prediction::Inapplicable => "inapplicable".into(),
        Prediction::NoChoice(v) => v.name().to_string(),
    }
}

fn cmd_compare(path: &Path, theories: &[Theory], cfg: &CompareConfig, out: &mut Vec<u8>, err: &mut Vec<u8>) -> i32 {
    if theories.contains(&Theory::Pt) && cfg.pt_risk_attribute.is_none() {
        let _ = writeln!(err, "error: the pt theory needs --pt-risk-attr");
        return EXIT_ERROR;
    }
    let Some(task) = load_or_report(path, err) else {
        return EXIT_ERROR;
    };
    let mut rows = Vec::new();
    for &theory in theories {
        match predict(&task, theory, cfg) {
            Ok(p) => rows.push(format!("{theory}: {}", prediction_cell(&p))),
            Err(e) => {
                let _ = writeln!(err, "error: {theory}: {e}");
                return EXIT_ERROR;
            }
        }
    }
    let _ = writeln!(out, "task {}", task.task_id);
    for row in rows {
        let _ = writeln!(out, "{row}");
    }
    EXIT_CHOSEN
}

fn cmd_validate(paths: &[PathBuf], out: &mut Vec<u8>) -> i32 {
    let mut code = EXIT_CHOSEN;
    for path in paths {
        match load(path) {
            Ok(_) => {
                let _ = writeln!(out, "{}: ok", path.display());
            }
            Err(e) => {
                code = EXIT_ERROR;
                for line in problem_lines(&e) {
                    let _ = writeln!(out, "{}: {line}", path.display());
                }
            }
        }
    }
    code
}

/// The engine as the batch command runs it: sifting, then the ladder search.
pub fn engine_verdict(task: &DecisionTask, mode: DominanceMode) -> Verdict {
    lsp(task, &psp(task).feasible, mode).verdict
}

/// Compares `engine` with the brute-force oracle in both dominance modes on
/// `count` generated tasks (task `i` uses seed `seed + i`) and on every
/// `*.json` scenario in `dir`. Returns 0 on full agreement, 4 on any
/// disagreement and 1 if a scenario file cannot be loaded.
pub fn batch(
    dir: Option<&Path>,
    seed: u64,
    count: u64,
    mix: &ValueMix,
    engine: &dyn Fn(&DecisionTask, DominanceMode) -> Verdict,
    out: &mut Vec<u8>,
    err: &mut Vec<u8>,
) -> i32 {
    let modes = [DominanceMode::Global, DominanceMode::Undominated];
    let check = |task: &DecisionTask| -> Vec<(DominanceMode, Verdict, Verdict)> {
        modes
            .iter()
            .filter_map(|&mode| {
                let (got, want) = (engine(task, mode), brute_force_lt(task, mode));
                (got != want).then_some((mode, got, want))
            })
            .collect()
    };

    let mut files = Vec::new();
    if let Some(dir) = dir {
        let listing = match std::fs::read_dir(dir) {
            Ok(listing) => listing,
            Err(e) => {
                let _ = writeln!(err, "error: {}: [io] {e}", dir.display());
                return EXIT_ERROR;
            }
        };
        files = listing
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
    }

    let mut total = 0u64;
    let mut agreed = 0u64;
    let mut failing_seeds = Vec::new();
    let mut failing_files = Vec::new();

    for i in 0..count {
        let task_seed = seed.wrapping_add(i);
        let task = random_task_within(task_seed, BATCH_SHAPE, mix);
        let bad = check(&task);
        total += 1;
        if bad.is_empty() {
            agreed += 1;
        }
        for (mode, got, want) in bad {
            let _ = writeln!(
                err,
                "disagreement: seed {task_seed} mode {}: engine {got}, oracle {want}",
                mode.as_str()
            );
            if failing_seeds.last() != Some(&task_seed) {
                failing_seeds.push(task_seed);
            }
        }
    }

    for path in &files {
        let Some(task) = load_or_report(path, err) else {
            return EXIT_ERROR;
        };
        let bad = check(&task);
        total += 1;
        if bad.is_empty() {
            agreed += 1;
        }
        for (mode, got, want) in bad {
            let _ = writeln!(
                err,
                "disagreement: {} mode {}: engine {got}, oracle {want}",
                path.display(),
                mode.as_str()
            );
            failing_files.push(path.display().to_string());
        }
    }

    let _ = writeln!(out, "{agreed}/{total} agree");
    if failing_seeds.is_empty() && failing_files.is_empty() {
        return EXIT_CHOSEN;
    }
    if let Some(first) = failing_seeds.first() {
        let _ = writeln!(out, "first disagreeing seed: {first}");
    }
    EXIT_DISAGREEMENT
}
