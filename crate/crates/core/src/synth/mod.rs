//! Synthesis of transformation programs over string tables.
//!
//! The operator algebra is a small closed set of column manipulations —
//! join, split, drop, replace — that covers everything a copy-paste routine
//! does to the values it transfers. [`synthesize`] searches for an operator
//! sequence mapping example inputs to example outputs: exact mode is a
//! uniform-cost search whose results are provably minimal, heuristic mode is
//! a weighted A* that trades optimality for speed.

mod op;
mod search;
mod table;

pub use op::{apply_op, run_program, OpError, Program, ProgramError, TransformOp};
pub use search::{
    enumerate_successors, heuristic_cost, synthesize, NotFoundReason, SearchBudget, SearchMode,
    SuccessorContext, SynthInputError, SynthesisOutcome,
};
pub use table::{Table, TableError};
