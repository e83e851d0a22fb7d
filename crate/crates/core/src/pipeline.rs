//! The three discovery strategies and their reports.
//!
//! * **Baseline** — one document-level example per trace, all stacked into a
//!   single synthesis call.
//! * **Opt 1** (group by target) — one synthesis call per target field over
//!   all of that target's examples.
//! * **Opt 1 + Opt 2** (additionally group by input structure) — per target,
//!   examples are grouped by the token pattern of their inputs; each group is
//!   solved from one randomly selected representative, the resulting program
//!   is checked against every group member, and synthesis falls back to the
//!   whole group when the check fails. Groups that end up with identical
//!   programs are merged.
//!
//! Targets and pattern groups are independent synthesis tasks and run in
//! parallel on the current rayon pool; reports are assembled in deterministic
//! (target, group) order regardless of completion order.

use crate::extract::{
    build_document_example, extract_examples_per_target, ExtractError, TargetRef,
    TransformationExample,
};
use crate::synth::{
    synthesize, NotFoundReason, Program, SearchBudget, SearchMode, SynthesisOutcome, Table,
};
use crate::tokenize::tokenize_inputs;
use crate::uilog::TaskTrace;
use indexmap::IndexMap;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Floor for the per-group share of the timeout under Opt 2.
const GROUP_TIMEOUT_FLOOR: Duration = Duration::from_secs(5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Baseline,
    Opt1,
    Opt1Opt2,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Baseline => write!(f, "Baseline"),
            Strategy::Opt1 => write!(f, "Opt 1"),
            Strategy::Opt1Opt2 => write!(f, "Opt 1 + Opt 2"),
        }
    }
}

/// Examples sharing one input token pattern, with the representative chosen
/// for single-example synthesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGroup {
    pub key: String,
    pub examples: Vec<TransformationExample>,
    pub representative: usize,
}

impl PatternGroup {
    pub fn representative_example(&self) -> &TransformationExample {
        &self.examples[self.representative]
    }
}

/// Why a target or pattern group produced no program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    Timeout,
    Exhausted,
    AmbiguousOutput,
    /// The examples themselves were unusable (mismatched arities).
    MalformedExamples(String),
}

impl From<NotFoundReason> for FailureReason {
    fn from(reason: NotFoundReason) -> FailureReason {
        match reason {
            NotFoundReason::Timeout => FailureReason::Timeout,
            NotFoundReason::Exhausted => FailureReason::Exhausted,
            NotFoundReason::AmbiguousOutput => FailureReason::AmbiguousOutput,
        }
    }
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::Timeout => write!(f, "timeout"),
            FailureReason::Exhausted => write!(f, "exhausted"),
            FailureReason::AmbiguousOutput => write!(f, "ambiguous output"),
            FailureReason::MalformedExamples(detail) => write!(f, "malformed examples: {detail}"),
        }
    }
}

/// A discovered program with the pattern keys it covers (several after
/// merging; Opt 1 uses the pseudo-key `*` for "all examples of the target").
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscoveredEntry {
    pub pattern_keys: Vec<String>,
    pub program: Program,
    pub pseudocode: String,
}

impl DiscoveredEntry {
    fn new(pattern_keys: Vec<String>, program: Program) -> DiscoveredEntry {
        DiscoveredEntry {
            pseudocode: program.to_string(),
            pattern_keys,
            program,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFailure {
    pub pattern_key: String,
    pub reason: FailureReason,
}

/// Per-target outcome: merged program entries plus per-group failures.
/// Every pattern key appears in exactly one entry or one failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetResult {
    pub target: TargetRef,
    pub entries: Vec<DiscoveredEntry>,
    pub failures: Vec<GroupFailure>,
    pub elapsed_ms: u64,
}

impl TargetResult {
    /// A target counts as discovered when every one of its groups has a
    /// verified program.
    pub fn discovered(&self) -> bool {
        !self.entries.is_empty() && self.failures.is_empty()
    }
}

/// Baseline outcome: one document-level synthesis over all traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentResult {
    pub trace_count: usize,
    pub outcome: SynthesisOutcome,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportBody {
    Document { result: DocumentResult },
    PerTarget { targets: Vec<TargetResult> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub discovered: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscoveryReport {
    pub strategy: Strategy,
    pub body: ReportBody,
    pub totals: Totals,
    pub total_elapsed_ms: u64,
}

impl DiscoveryReport {
    fn new(strategy: Strategy, body: ReportBody, target_count: usize, elapsed: Duration) -> Self {
        let discovered = match &body {
            ReportBody::Document { result } => match result.outcome {
                SynthesisOutcome::Found { .. } => target_count,
                SynthesisOutcome::NotFound { .. } => 0,
            },
            ReportBody::PerTarget { targets } => {
                targets.iter().filter(|t| t.discovered()).count()
            }
        };
        DiscoveryReport {
            strategy,
            body,
            totals: Totals {
                discovered,
                total: target_count,
            },
            total_elapsed_ms: elapsed.as_millis() as u64,
        }
    }

    pub fn target_results(&self) -> &[TargetResult] {
        match &self.body {
            ReportBody::PerTarget { targets } => targets,
            ReportBody::Document { .. } => &[],
        }
    }

    /// One comparison row: approach, execution time, discovered/total.
    pub fn summary_row(&self) -> String {
        format!(
            "{} | {:.3} | {}/{}",
            self.strategy,
            self.total_elapsed_ms as f64 / 1000.0,
            self.totals.discovered,
            self.totals.total
        )
    }

    /// Human-readable rendering: the summary row plus per-target detail.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str("Approach | Execution time | Discovered transformations\n");
        out.push_str(&self.summary_row());
        out.push('\n');
        match &self.body {
            ReportBody::Document { result } => match &result.outcome {
                SynthesisOutcome::Found { program, cost, .. } => {
                    out.push_str(&format!(
                        "\ndocument-level program ({cost} ops):\n{program}\n"
                    ));
                }
                SynthesisOutcome::NotFound { reason } => {
                    out.push_str(&format!(
                        "\nno document-level program: {}\n",
                        FailureReason::from(*reason)
                    ));
                }
            },
            ReportBody::PerTarget { targets } => {
                for target in targets {
                    out.push('\n');
                    out.push_str(&format!(
                        "{} ({} ms)\n",
                        target.target.field, target.elapsed_ms
                    ));
                    for entry in &target.entries {
                        out.push_str(&format!(
                            "  patterns {:?}:\n",
                            entry
                                .pattern_keys
                                .iter()
                                .map(|k| k.replace('\u{1F}', " + "))
                                .collect::<Vec<_>>()
                        ));
                        for line in entry.pseudocode.lines() {
                            out.push_str(&format!("    {line}\n"));
                        }
                    }
                    for failure in &target.failures {
                        out.push_str(&format!(
                            "  pattern {:?}: failed ({})\n",
                            failure.pattern_key.replace('\u{1F}', " + "),
                            failure.reason
                        ));
                    }
                }
            }
        }
        out
    }

    /// Every program in the report, rendered as pseudocode.
    pub fn render_pseudocode(&self) -> String {
        let mut out = String::new();
        match &self.body {
            ReportBody::Document { result } => {
                if let SynthesisOutcome::Found { program, .. } = &result.outcome {
                    out.push_str(&format!("# document\n{program}\n"));
                }
            }
            ReportBody::PerTarget { targets } => {
                for target in targets {
                    for entry in &target.entries {
                        out.push_str(&format!(
                            "# {}\n{}\n",
                            target.target.field, entry.pseudocode
                        ));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Extract(#[from] ExtractError),
}

fn example_pair(example: &TransformationExample) -> Result<(Table, Table), String> {
    let input = Table::from_row(example.input_values()).map_err(|e| e.to_string())?;
    let output = Table::from_row(example.output_values()).map_err(|e| e.to_string())?;
    Ok((input, output))
}

fn example_pairs(examples: &[TransformationExample]) -> Result<Vec<(Table, Table)>, String> {
    examples.iter().map(example_pair).collect()
}

fn run_synthesis(
    pairs: &[(Table, Table)],
    budget: &SearchBudget,
) -> Result<SynthesisOutcome, FailureReason> {
    synthesize(pairs, budget, SearchMode::Heuristic)
        .map_err(|err| FailureReason::MalformedExamples(err.to_string()))
}

/// Builds one document example per trace, stacks them, and synthesizes once.
pub fn discover_baseline(
    traces: &[TaskTrace],
    budget: &SearchBudget,
) -> Result<DiscoveryReport, PipelineError> {
    let started = Instant::now();
    let examples: Vec<TransformationExample> = traces
        .iter()
        .map(build_document_example)
        .collect::<Result<_, _>>()?;
    let target_count = extract_examples_per_target(traces)?.len();

    let synthesis_start = Instant::now();
    let outcome = match example_pairs(&examples) {
        Ok(pairs) => run_synthesis(&pairs, budget),
        Err(detail) => Err(FailureReason::MalformedExamples(detail)),
    };
    // Ragged document examples cannot be stacked; the strategy simply fails
    // on such logs rather than erroring out.
    let outcome = outcome.unwrap_or(SynthesisOutcome::NotFound {
        reason: NotFoundReason::Exhausted,
    });
    let result = DocumentResult {
        trace_count: traces.len(),
        outcome,
        elapsed_ms: synthesis_start.elapsed().as_millis() as u64,
    };
    Ok(DiscoveryReport::new(
        Strategy::Baseline,
        ReportBody::Document { result },
        target_count,
        started.elapsed(),
    ))
}

/// One multi-example synthesis call per target field.
pub fn discover_by_target(
    traces: &[TaskTrace],
    budget: &SearchBudget,
) -> Result<DiscoveryReport, PipelineError> {
    let started = Instant::now();
    let by_target = extract_examples_per_target(traces)?;
    let target_count = by_target.len();

    let tasks: Vec<(TargetRef, Vec<TransformationExample>)> = by_target.into_iter().collect();
    let targets: Vec<TargetResult> = tasks
        .par_iter()
        .map(|(target, examples)| {
            let task_start = Instant::now();
            let outcome = match example_pairs(examples) {
                Ok(pairs) => run_synthesis(&pairs, budget),
                Err(detail) => Err(FailureReason::MalformedExamples(detail)),
            };
            let (entries, failures) = match outcome {
                Ok(SynthesisOutcome::Found { program, .. }) => (
                    vec![DiscoveredEntry::new(vec!["*".to_string()], program)],
                    Vec::new(),
                ),
                Ok(SynthesisOutcome::NotFound { reason }) => (
                    Vec::new(),
                    vec![GroupFailure {
                        pattern_key: "*".to_string(),
                        reason: reason.into(),
                    }],
                ),
                Err(reason) => (
                    Vec::new(),
                    vec![GroupFailure {
                        pattern_key: "*".to_string(),
                        reason,
                    }],
                ),
            };
            TargetResult {
                target: target.clone(),
                entries,
                failures,
                elapsed_ms: task_start.elapsed().as_millis() as u64,
            }
        })
        .collect();

    Ok(DiscoveryReport::new(
        Strategy::Opt1,
        ReportBody::PerTarget { targets },
        target_count,
        started.elapsed(),
    ))
}

/// Groups each target's examples by input token pattern and synthesizes one
/// program per group from a seeded-random representative, falling back to
/// whole-group synthesis when the representative's program does not fit every
/// member. Groups with identical programs are merged.
pub fn discover_grouped(
    traces: &[TaskTrace],
    budget: &SearchBudget,
    selection_seed: u64,
) -> Result<DiscoveryReport, PipelineError> {
    let started = Instant::now();
    let by_target = extract_examples_per_target(traces)?;
    let target_count = by_target.len();

    // Representatives are drawn sequentially in (target, group) order before
    // any parallel work, so the picks depend only on the seed.
    let mut rng = StdRng::seed_from_u64(selection_seed);
    let tasks: Vec<(TargetRef, Vec<PatternGroup>)> = by_target
        .into_iter()
        .map(|(target, examples)| {
            let mut groups: IndexMap<String, Vec<TransformationExample>> = IndexMap::new();
            for example in examples {
                groups
                    .entry(tokenize_inputs(&example))
                    .or_default()
                    .push(example);
            }
            let groups = groups
                .into_iter()
                .map(|(key, examples)| {
                    let representative = rng.random_range(0..examples.len());
                    PatternGroup {
                        key,
                        examples,
                        representative,
                    }
                })
                .collect();
            (target, groups)
        })
        .collect();

    let targets: Vec<TargetResult> = tasks
        .par_iter()
        .map(|(target, groups)| {
            let task_start = Instant::now();
            let group_budget = SearchBudget {
                timeout: (budget.timeout / groups.len().max(1) as u32).max(GROUP_TIMEOUT_FLOOR),
                ..budget.clone()
            };
            let outcomes: Vec<Result<(String, Program), GroupFailure>> = groups
                .par_iter()
                .map(|group| solve_group(group, &group_budget))
                .collect();
            let mut found = Vec::new();
            let mut failures = Vec::new();
            for outcome in outcomes {
                match outcome {
                    Ok(pair) => found.push(pair),
                    Err(failure) => failures.push(failure),
                }
            }
            let entries = merge_groups(found)
                .into_iter()
                .map(|(keys, program)| DiscoveredEntry::new(keys, program))
                .collect();
            TargetResult {
                target: target.clone(),
                entries,
                failures,
                elapsed_ms: task_start.elapsed().as_millis() as u64,
            }
        })
        .collect();

    Ok(DiscoveryReport::new(
        Strategy::Opt1Opt2,
        ReportBody::PerTarget { targets },
        target_count,
        started.elapsed(),
    ))
}

/// Synthesizes one group: representative first, then the verify-fallback
/// protocol.
fn solve_group(
    group: &PatternGroup,
    budget: &SearchBudget,
) -> Result<(String, Program), GroupFailure> {
    let fail = |reason: FailureReason| GroupFailure {
        pattern_key: group.key.clone(),
        reason,
    };

    let rep_pair = example_pair(group.representative_example())
        .map_err(|detail| fail(FailureReason::MalformedExamples(detail)))?;
    let outcome = run_synthesis(&[rep_pair], budget).map_err(&fail)?;
    match outcome {
        SynthesisOutcome::Found { program, .. } => {
            if fits_all(&program, &group.examples) {
                return Ok((group.key.clone(), program));
            }
            // The representative's program does not generalize; try the
            // whole group at once.
            let pairs = example_pairs(&group.examples)
                .map_err(|detail| fail(FailureReason::MalformedExamples(detail)))?;
            match run_synthesis(&pairs, budget).map_err(&fail)? {
                SynthesisOutcome::Found { program, .. } => Ok((group.key.clone(), program)),
                SynthesisOutcome::NotFound { reason } => Err(fail(reason.into())),
            }
        }
        SynthesisOutcome::NotFound { reason } => Err(fail(reason.into())),
    }
}

/// Checks a program against every example of a group.
fn fits_all(program: &Program, examples: &[TransformationExample]) -> bool {
    examples.iter().all(|example| {
        let Ok((input, output)) = example_pair(example) else {
            return false;
        };
        program
            .run(&input)
            .map(|result| result == output)
            .unwrap_or(false)
    })
}

/// Coalesces groups whose programs are identical op sequences; first
/// appearance order is preserved.
pub fn merge_groups(results: Vec<(String, Program)>) -> Vec<(Vec<String>, Program)> {
    let mut merged: Vec<(Vec<String>, Program)> = Vec::new();
    for (key, program) in results {
        if let Some((keys, _)) = merged.iter_mut().find(|(_, p)| *p == program) {
            keys.push(key);
        } else {
            merged.push((vec![key], program));
        }
    }
    merged
}
