//! A* search for operator sequences mapping example inputs to outputs.
//!
//! The state space has one node per reachable table; edges are single
//! operators with unit cost, so path cost is program length. All examples are
//! advanced in lockstep: their rows are stacked into one table, which makes
//! "one op sequence must fit every example" hold by construction (operators
//! never move rows, so rows keep their example of origin).
//!
//! Two modes:
//!
//! * [`SearchMode::Exact`] — uniform-cost search. Returned programs are
//!   provably minimal; used as the optimality oracle.
//! * [`SearchMode::Heuristic`] — weighted A* with the structural guide
//!   [`heuristic_cost`], plus an up-front ambiguity check: when two rows
//!   demand the same output from different inputs, the output's origin is
//!   underdetermined and the search refuses with
//!   [`NotFoundReason::AmbiguousOutput`] instead of burning its budget.
//!   This mirrors how example-matching synthesizers behave on ambiguous
//!   data; grouping by input pattern (see the pipeline) is the intended way
//!   around it.

use super::op::{apply_op, Program, TransformOp};
use super::table::Table;
use serde::{Deserialize, Serialize};
use std::collections::hash_map::DefaultHasher;
use std::collections::{BinaryHeap, HashSet};
use std::hash::Hasher;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Weight on the guide in heuristic mode; h is scaled against unit op costs.
const HEURISTIC_WEIGHT: f64 = 2.0;

/// Search limits. `max_ops` bounds program length, `timeout` wall-clock time,
/// `max_expansions` the number of expanded states (the deterministic budget).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_ops: usize,
    pub timeout: Duration,
    pub max_expansions: u64,
    /// Optional cap on the frontier size; worst entries are discarded first.
    pub beam_width: Option<usize>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_ops: 6,
            timeout: Duration::from_secs(60),
            max_expansions: 2_000_000,
            beam_width: None,
        }
    }
}

impl SearchBudget {
    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    /// Uniform-cost search; minimal program length guaranteed.
    Exact,
    /// Weighted A* with the structural guide; faster, not optimal.
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NotFoundReason {
    /// Budget expired (wall clock or expansion count).
    Timeout,
    /// The reachable space within `max_ops` holds no solution.
    Exhausted,
    /// Two rows demand the same output from different inputs, so the
    /// output's origin is underdetermined.
    AmbiguousOutput,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SynthesisOutcome {
    Found {
        program: Program,
        cost: usize,
        expansions: u64,
        elapsed: Duration,
    },
    NotFound {
        reason: NotFoundReason,
    },
}

impl SynthesisOutcome {
    pub fn program(&self) -> Option<&Program> {
        match self {
            SynthesisOutcome::Found { program, .. } => Some(program),
            SynthesisOutcome::NotFound { .. } => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthInputError {
    #[error("no examples given")]
    NoExamples,
    #[error("example {example}: input has {found} columns, expected {expected}")]
    InputColumnMismatch {
        example: usize,
        expected: usize,
        found: usize,
    },
    #[error("example {example}: output has {found} columns, expected {expected}")]
    OutputColumnMismatch {
        example: usize,
        expected: usize,
        found: usize,
    },
    #[error("example {example}: input has {input_rows} rows but output has {output_rows}")]
    RowCountMismatch {
        example: usize,
        input_rows: usize,
        output_rows: usize,
    },
}

/// Candidate glue and replacement characters, derived from the goal. Split
/// delimiters come from the state itself; glue and replacement candidates
/// additionally draw on the separators of the goal cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessorContext {
    glues: Vec<String>,
    replacements: Vec<String>,
}

const BASE_GLUES: [&str; 7] = ["", " ", "-", "/", ".", ",", ", "];

fn is_separator(c: char) -> bool {
    !c.is_alphabetic() && !c.is_numeric()
}

/// Single separator characters and adjacent separator pairs in a string.
fn separator_fragments(value: &str, singles: &mut Vec<String>, pairs: &mut Vec<String>) {
    let mut previous: Option<char> = None;
    for c in value.chars() {
        if is_separator(c) {
            let single = c.to_string();
            if !singles.contains(&single) {
                singles.push(single);
            }
            if let Some(p) = previous {
                let pair = format!("{p}{c}");
                if !pairs.contains(&pair) {
                    pairs.push(pair);
                }
            }
            previous = Some(c);
        } else {
            previous = None;
        }
    }
}

impl SuccessorContext {
    /// Context for reaching `goal`. Replacement candidates are always
    /// separators, never alphanumeric: the search relies on operators never
    /// inventing letters or digits.
    pub fn for_goal(goal: &Table) -> SuccessorContext {
        let mut singles = Vec::new();
        let mut pairs = Vec::new();
        for row in goal.rows() {
            for cell in row {
                separator_fragments(cell, &mut singles, &mut pairs);
            }
        }
        singles.sort();
        pairs.sort();
        let mut glues: Vec<String> = BASE_GLUES.iter().map(|s| s.to_string()).collect();
        for extra in singles.iter().chain(pairs.iter()) {
            if !glues.contains(extra) {
                glues.push(extra.clone());
            }
        }
        SuccessorContext {
            glues,
            replacements: singles,
        }
    }
}

fn fingerprint(table: &Table) -> u128 {
    let mut lo = DefaultHasher::new();
    lo.write_u8(0);
    table.hash_canonical(&mut lo);
    let mut hi = DefaultHasher::new();
    hi.write_u8(1);
    table.hash_canonical(&mut hi);
    ((hi.finish() as u128) << 64) | lo.finish() as u128
}

/// All valid candidate operations on `state` with their resulting tables.
///
/// Split delimiters are the separator characters and separator pairs present
/// in the column; glue and replacement candidates come from `ctx`. Ops that
/// violate preconditions or leave the table unchanged are pruned, and
/// resulting tables are deduplicated.
pub fn enumerate_successors(state: &Table, ctx: &SuccessorContext) -> Vec<(TransformOp, Table)> {
    let columns = state.column_count();
    let mut ops: Vec<TransformOp> = Vec::new();

    for position in 0..columns {
        let mut singles = Vec::new();
        let mut pairs = Vec::new();
        for cell in state.column(position) {
            separator_fragments(cell, &mut singles, &mut pairs);
        }
        singles.sort();
        pairs.sort();
        for delimiter in singles.iter().chain(pairs.iter()) {
            ops.push(TransformOp::Split {
                position,
                delimiter: delimiter.clone(),
            });
        }
    }
    for position in 0..columns.saturating_sub(1) {
        for glue in &ctx.glues {
            ops.push(TransformOp::JoinChar {
                position,
                glue: glue.clone(),
            });
        }
    }
    if columns > 1 {
        for position in 0..columns {
            ops.push(TransformOp::Drop { position });
        }
    }
    for position in 0..columns {
        let mut singles = Vec::new();
        let mut pairs = Vec::new();
        for cell in state.column(position) {
            separator_fragments(cell, &mut singles, &mut pairs);
        }
        singles.sort();
        for old in singles {
            for new in &ctx.replacements {
                if *new != old {
                    ops.push(TransformOp::Replace {
                        position,
                        old: old.clone(),
                        new: new.clone(),
                    });
                }
            }
        }
    }

    let parent = fingerprint(state);
    let mut seen: HashSet<u128> = HashSet::new();
    let mut successors = Vec::with_capacity(ops.len());
    for op in ops {
        let Ok(result) = apply_op(state, &op) else {
            continue;
        };
        let fp = fingerprint(&result);
        if fp == parent || !seen.insert(fp) {
            continue;
        }
        successors.push((op, result));
    }
    successors
}

fn alnum_projection(s: &str) -> String {
    s.chars().filter(|c| !is_separator(*c)).collect()
}

fn row_projection(row: &[String]) -> String {
    row.iter().flat_map(|cell| {
        cell.chars().filter(|c| !is_separator(*c))
    }).collect()
}

fn is_subsequence(needle: &str, haystack: &str) -> bool {
    let mut chars = haystack.chars();
    needle.chars().all(|n| chars.by_ref().any(|h| h == n))
}

/// Structural distance guide: 0 iff `state == goal`, otherwise half the sum
/// of per-goal-column scores (0 if an identical state column exists, 1 if
/// the column's content is embedded in the state rows, 2 if it is absent)
/// plus half the column-count difference. The divisor 2 is the most columns
/// one operator can affect, so the guide underestimates when each operator
/// touches one column; it is not admissible in general, which is why exact
/// mode exists.
pub fn heuristic_cost(state: &Table, goal: &Table) -> f64 {
    if state == goal {
        return 0.0;
    }
    if state.row_count() != goal.row_count() {
        // Operators never change row counts; the goal is unreachable.
        return f64::INFINITY;
    }
    let state_projections: Vec<String> = state.rows().iter().map(|r| row_projection(r)).collect();

    let mut score = 0usize;
    for goal_column in 0..goal.column_count() {
        let verbatim = (0..state.column_count()).any(|state_column| {
            state
                .column(state_column)
                .zip(goal.column(goal_column))
                .all(|(s, g)| s == g)
        });
        if verbatim {
            continue;
        }
        let embedded = goal
            .column(goal_column)
            .enumerate()
            .all(|(row, cell)| state_projections[row].contains(&alnum_projection(cell)));
        score += if embedded { 1 } else { 2 };
    }
    score += state.column_count().abs_diff(goal.column_count());
    let h = score as f64 / 2.0;
    if h == 0.0 {
        // Same multiset of columns but wrong arrangement: not the goal yet.
        0.5
    } else {
        h
    }
}

/// True when some pair of rows has equal output but different input, making
/// the output's origin underdetermined across examples.
fn has_ambiguous_output(input: &Table, output: &Table) -> bool {
    let rows = input.row_count();
    for i in 0..rows {
        for j in i + 1..rows {
            if output.rows()[i] == output.rows()[j] && input.rows()[i] != input.rows()[j] {
                return true;
            }
        }
    }
    false
}

/// Dead-state test: operators can delete alphanumeric content (drops) but
/// never create or reorder it, so a state whose row projection does not
/// cover the goal row projection as a subsequence can never reach the goal.
fn projection_dead(state: &Table, goal_projections: &[String]) -> bool {
    state
        .rows()
        .iter()
        .zip(goal_projections)
        .any(|(row, goal_proj)| !is_subsequence(goal_proj, &row_projection(row)))
}

struct Node {
    state: Table,
    parent: Option<usize>,
    op: Option<TransformOp>,
    depth: usize,
}

#[derive(PartialEq, Eq)]
struct FrontierEntry {
    /// Scaled f = g + weight * h, in thousandths.
    priority: u64,
    depth: usize,
    seq: u64,
    parent: usize,
    op: TransformOp,
}

impl Ord for FrontierEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // BinaryHeap is a max-heap; invert for ascending (f, g, seq).
        (other.priority, other.depth, other.seq).cmp(&(self.priority, self.depth, self.seq))
    }
}

impl PartialOrd for FrontierEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Search bookkeeping: the arena of expanded nodes, the frontier, and the
/// goal-derived pruning data. Only expanded nodes keep their tables; frontier
/// entries re-derive theirs from the parent on pop, which bounds memory by
/// expansion count rather than frontier size.
struct Search<'a> {
    budget: &'a SearchBudget,
    mode: SearchMode,
    ctx: SuccessorContext,
    goal: &'a Table,
    goal_fp: u128,
    goal_projections: Vec<String>,
    nodes: Vec<Node>,
    seen: HashSet<u128>,
    frontier: BinaryHeap<FrontierEntry>,
    seq: u64,
    expansions: u64,
}

impl<'a> Search<'a> {
    fn new(start: &Table, goal: &'a Table, budget: &'a SearchBudget, mode: SearchMode) -> Self {
        let mut seen = HashSet::new();
        seen.insert(fingerprint(start));
        Search {
            budget,
            mode,
            ctx: SuccessorContext::for_goal(goal),
            goal,
            goal_fp: fingerprint(goal),
            goal_projections: goal.rows().iter().map(|r| row_projection(r)).collect(),
            nodes: vec![Node {
                state: start.clone(),
                parent: None,
                op: None,
                depth: 0,
            }],
            seen,
            frontier: BinaryHeap::new(),
            seq: 0,
            expansions: 0,
        }
    }

    fn priority(&self, depth: usize, state: &Table) -> u64 {
        let h = match self.mode {
            SearchMode::Exact => 0.0,
            SearchMode::Heuristic => HEURISTIC_WEIGHT * heuristic_cost(state, self.goal),
        };
        depth as u64 * 1000 + (h * 1000.0).round() as u64
    }

    fn program_to(&self, parent: usize, last_op: TransformOp) -> Program {
        let mut ops = vec![last_op];
        let mut cursor = parent;
        while let Some(op) = &self.nodes[cursor].op {
            ops.push(op.clone());
            cursor = self.nodes[cursor].parent.expect("non-root nodes have parents");
        }
        ops.reverse();
        Program::new(ops)
    }

    /// Expands one node, pushing viable successors; returns a finished
    /// program the moment a successor hits the goal.
    fn expand(&mut self, node_index: usize) -> Option<Program> {
        let depth = self.nodes[node_index].depth;
        if depth >= self.budget.max_ops {
            return None;
        }
        for (op, state) in enumerate_successors(&self.nodes[node_index].state, &self.ctx) {
            let fp = fingerprint(&state);
            if fp == self.goal_fp && state == *self.goal {
                return Some(self.program_to(node_index, op));
            }
            if self.seen.contains(&fp) {
                continue;
            }
            // Each op narrows the table by at most one column, so a state
            // this much wider than the goal cannot finish in the remaining
            // depth.
            let width_slack = state.column_count().saturating_sub(self.goal.column_count());
            if depth + 1 + width_slack > self.budget.max_ops {
                continue;
            }
            if projection_dead(&state, &self.goal_projections) {
                continue;
            }
            self.seen.insert(fp);
            self.seq += 1;
            self.frontier.push(FrontierEntry {
                priority: self.priority(depth + 1, &state),
                depth: depth + 1,
                seq: self.seq,
                parent: node_index,
                op,
            });
        }
        None
    }

    fn trim_to_beam(&mut self) {
        let Some(width) = self.budget.beam_width else {
            return;
        };
        if self.frontier.len() > width.saturating_mul(2).max(16) {
            let mut entries: Vec<FrontierEntry> = std::mem::take(&mut self.frontier).into_vec();
            entries.sort_by_key(|e| (e.priority, e.depth, e.seq));
            entries.truncate(width);
            self.frontier = entries.into();
        }
    }

    fn run(&mut self, start_time: Instant) -> Result<Program, NotFoundReason> {
        if let Some(program) = self.expand(0) {
            return Ok(program);
        }
        loop {
            if start_time.elapsed() > self.budget.timeout
                || self.expansions >= self.budget.max_expansions
            {
                return Err(NotFoundReason::Timeout);
            }
            self.trim_to_beam();
            let Some(entry) = self.frontier.pop() else {
                return Err(NotFoundReason::Exhausted);
            };
            let state = apply_op(&self.nodes[entry.parent].state, &entry.op)
                .expect("frontier entries were valid when generated");
            self.nodes.push(Node {
                state,
                parent: Some(entry.parent),
                op: Some(entry.op),
                depth: entry.depth,
            });
            self.expansions += 1;
            if let Some(program) = self.expand(self.nodes.len() - 1) {
                return Ok(program);
            }
        }
    }
}

/// Searches for a program transforming every example input into its output.
///
/// All example inputs must have the same column count (likewise outputs),
/// and each pair the same row count. Examples are stacked and searched in
/// lockstep; any returned program is re-verified against every example pair
/// before the outcome is reported.
pub fn synthesize(
    examples: &[(Table, Table)],
    budget: &SearchBudget,
    mode: SearchMode,
) -> Result<SynthesisOutcome, SynthInputError> {
    let start_time = Instant::now();
    let (input, output) = validate_and_stack(examples)?;

    if mode == SearchMode::Heuristic && has_ambiguous_output(&input, &output) {
        return Ok(SynthesisOutcome::NotFound {
            reason: NotFoundReason::AmbiguousOutput,
        });
    }

    let verified = |program: Program, expansions: u64| {
        for (i, (example_input, example_output)) in examples.iter().enumerate() {
            let replayed = program.run(example_input);
            assert_eq!(
                replayed.as_ref(),
                Ok(example_output),
                "synthesized program failed verification on example {i}"
            );
        }
        SynthesisOutcome::Found {
            cost: program.len(),
            program,
            expansions,
            elapsed: start_time.elapsed(),
        }
    };

    if input == output {
        return Ok(verified(Program::default(), 0));
    }

    let mut search = Search::new(&input, &output, budget, mode);
    if projection_dead(&input, &search.goal_projections) {
        return Ok(SynthesisOutcome::NotFound {
            reason: NotFoundReason::Exhausted,
        });
    }
    match search.run(start_time) {
        Ok(program) => Ok(verified(program, search.expansions)),
        Err(reason) => Ok(SynthesisOutcome::NotFound { reason }),
    }
}

fn validate_and_stack(examples: &[(Table, Table)]) -> Result<(Table, Table), SynthInputError> {
    let Some((first_input, first_output)) = examples.first() else {
        return Err(SynthInputError::NoExamples);
    };
    let input_columns = first_input.column_count();
    let output_columns = first_output.column_count();
    for (i, (input, output)) in examples.iter().enumerate() {
        if input.column_count() != input_columns {
            return Err(SynthInputError::InputColumnMismatch {
                example: i,
                expected: input_columns,
                found: input.column_count(),
            });
        }
        if output.column_count() != output_columns {
            return Err(SynthInputError::OutputColumnMismatch {
                example: i,
                expected: output_columns,
                found: output.column_count(),
            });
        }
        if input.row_count() != output.row_count() {
            return Err(SynthInputError::RowCountMismatch {
                example: i,
                input_rows: input.row_count(),
                output_rows: output.row_count(),
            });
        }
    }
    let inputs: Vec<Table> = examples.iter().map(|(i, _)| i.clone()).collect();
    let outputs: Vec<Table> = examples.iter().map(|(_, o)| o.clone()).collect();
    Ok((
        Table::stack(&inputs).expect("validated above"),
        Table::stack(&outputs).expect("validated above"),
    ))
}
