//! Running the three strategies over a generated scenario.

use super::{generate_log, ScenarioSpec};
use crate::pipeline::{
    discover_baseline, discover_by_target, discover_grouped, DiscoveryReport, FailureReason,
    PipelineError, Strategy, TargetResult,
};
use crate::synth::SearchBudget;
use crate::uilog::{default_rules, filter_trace, segment, EndActionSpec, SegmentError, TaskTrace};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Per-strategy search budgets; each synthesis call gets the budget of its
/// strategy.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct StrategyBudgets {
    pub baseline: SearchBudget,
    pub by_target: SearchBudget,
    pub grouped: SearchBudget,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("scenario produced no traces: {0}")]
    Segment(#[from] SegmentError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

/// One comparison row: approach, execution time, discovered/total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyRow {
    pub strategy: Strategy,
    pub elapsed_ms: u64,
    pub discovered: usize,
    pub total: usize,
}

/// Per-target outcome of one strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RowOutcome {
    Found { elapsed_ms: u64 },
    Failed { reason: FailureReason },
    /// The strategy does not produce per-target programs (document-level
    /// baseline).
    NotApplicable,
}

impl std::fmt::Display for RowOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowOutcome::Found { elapsed_ms } => {
                write!(f, "{:.3}", *elapsed_ms as f64 / 1000.0)
            }
            RowOutcome::Failed { reason } => write!(f, "N/A ({reason})"),
            RowOutcome::NotApplicable => write!(f, "-"),
        }
    }
}

/// One transformation row: the target, a sample input/output pair, and the
/// per-strategy outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformationRow {
    pub target: String,
    pub example_inputs: Vec<String>,
    pub example_output: String,
    pub baseline: RowOutcome,
    pub by_target: RowOutcome,
    pub grouped: RowOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub trace_count: usize,
    pub seed: u64,
    pub strategies: Vec<StrategyRow>,
    pub transformations: Vec<TransformationRow>,
    pub baseline: DiscoveryReport,
    pub by_target: DiscoveryReport,
    pub grouped: DiscoveryReport,
}

impl BenchmarkReport {
    /// The discovery-results comparison plus per-transformation rows, as
    /// Markdown tables.
    pub fn render_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("| Approach | Execution time (s) | Discovered transformations |\n");
        out.push_str("|---|---|---|\n");
        for row in &self.strategies {
            out.push_str(&format!(
                "| {} | {:.3} | {}/{} |\n",
                row.strategy,
                row.elapsed_ms as f64 / 1000.0,
                row.discovered,
                row.total
            ));
        }
        out.push('\n');
        out.push_str("| Transformation | Example | Baseline | Opt 1 | Opt 1 + Opt 2 |\n");
        out.push_str("|---|---|---|---|---|\n");
        for row in &self.transformations {
            out.push_str(&format!(
                "| {} | {} ⇒ {} | {} | {} | {} |\n",
                row.target,
                row.example_inputs.join(", "),
                row.example_output,
                row.baseline,
                row.by_target,
                row.grouped
            ));
        }
        out
    }

    /// The same rows as CSV (comparison table, then transformation rows).
    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("approach,execution_time_s,discovered,total\n");
        for row in &self.strategies {
            out.push_str(&format!(
                "{},{:.3},{},{}\n",
                row.strategy,
                row.elapsed_ms as f64 / 1000.0,
                row.discovered,
                row.total
            ));
        }
        out.push('\n');
        out.push_str("transformation,example_input,example_output,baseline,opt1,opt1opt2\n");
        for row in &self.transformations {
            out.push_str(&format!(
                "{},{:?},{:?},{},{},{}\n",
                row.target,
                row.example_inputs.join(" + "),
                row.example_output,
                row.baseline,
                row.by_target,
                row.grouped
            ));
        }
        out
    }
}

fn row_outcome(result: Option<&TargetResult>) -> RowOutcome {
    match result {
        Some(result) if result.discovered() => RowOutcome::Found {
            elapsed_ms: result.elapsed_ms,
        },
        Some(result) => {
            let reason = result
                .failures
                .first()
                .map(|f| f.reason.clone())
                .unwrap_or(FailureReason::Exhausted);
            RowOutcome::Failed { reason }
        }
        None => RowOutcome::NotApplicable,
    }
}

/// Generates the scenario log, preprocesses it, and runs all three discovery
/// strategies. `spec.seed` doubles as the representative-selection seed of
/// the grouped strategy.
pub fn run_benchmark(
    spec: &ScenarioSpec,
    budgets: &StrategyBudgets,
) -> Result<BenchmarkReport, BenchError> {
    let log = generate_log(spec);
    let segmentation = segment(&log, &EndActionSpec::default())?;
    let rules = default_rules();
    let traces: Vec<TaskTrace> = segmentation
        .traces
        .iter()
        .map(|t| filter_trace(t, &rules))
        .collect();

    let baseline = discover_baseline(&traces, &budgets.baseline)?;
    let by_target = discover_by_target(&traces, &budgets.by_target)?;
    let grouped = discover_grouped(&traces, &budgets.grouped, spec.seed)?;

    let strategies = vec![
        StrategyRow {
            strategy: Strategy::Baseline,
            elapsed_ms: baseline.total_elapsed_ms,
            discovered: baseline.totals.discovered,
            total: baseline.totals.total,
        },
        StrategyRow {
            strategy: Strategy::Opt1,
            elapsed_ms: by_target.total_elapsed_ms,
            discovered: by_target.totals.discovered,
            total: by_target.totals.total,
        },
        StrategyRow {
            strategy: Strategy::Opt1Opt2,
            elapsed_ms: grouped.total_elapsed_ms,
            discovered: grouped.totals.discovered,
            total: grouped.totals.total,
        },
    ];

    let examples =
        crate::extract::extract_examples_per_target(&traces).map_err(PipelineError::from)?;
    let transformations = examples
        .iter()
        .map(|(target, examples)| {
            let sample = &examples[0];
            TransformationRow {
                target: target.field.clone(),
                example_inputs: sample.input_values(),
                example_output: sample
                    .output_cells
                    .first()
                    .map(|(_, v)| v.clone())
                    .unwrap_or_default(),
                baseline: RowOutcome::NotApplicable,
                by_target: row_outcome(
                    by_target
                        .target_results()
                        .iter()
                        .find(|r| r.target == *target),
                ),
                grouped: row_outcome(
                    grouped
                        .target_results()
                        .iter()
                        .find(|r| r.target == *target),
                ),
            }
        })
        .collect();

    Ok(BenchmarkReport {
        trace_count: traces.len(),
        seed: spec.seed,
        strategies,
        transformations,
        baseline,
        by_target,
        grouped,
    })
}
