//! The table operator algebra and program interpreter.
//!
//! Four column operators are enough to express every transformation a
//! copy-paste routine performs on the values it transfers: merging adjacent
//! columns with a glue character, splitting a column on a delimiter,
//! dropping a column, and replacing occurrences of a substring within a
//! column. Positions are 0-based column indices.

use super::table::Table;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum TransformOp {
    /// Merge column `position` with its right neighbor, `glue` in between.
    JoinChar { position: usize, glue: String },
    /// Replace column `position` with the delimiter-separated parts of its
    /// cells. The delimiter must occur the same number of times in every row.
    Split { position: usize, delimiter: String },
    /// Remove column `position`.
    Drop { position: usize },
    /// Replace every occurrence of `old` with `new` in column `position`.
    Replace {
        position: usize,
        old: String,
        new: String,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpError {
    #[error("position {position} out of range for a table with {columns} columns")]
    PositionOutOfRange { position: usize, columns: usize },
    #[error("split on {delimiter:?} at column {position} is ragged: {first} occurrences in row 0, {offending} in row {row}")]
    RaggedSplit {
        position: usize,
        delimiter: String,
        first: usize,
        offending: usize,
        row: usize,
    },
    #[error("empty delimiter")]
    EmptyDelimiter,
}

fn quoted(s: &str) -> String {
    format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
}

impl fmt::Display for TransformOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformOp::JoinChar { position, glue } => {
                write!(f, "t = f_join_char(t, {position}, {})", quoted(glue))
            }
            TransformOp::Split { position, delimiter } => {
                write!(f, "t = f_split(t, {position}, {})", quoted(delimiter))
            }
            TransformOp::Drop { position } => write!(f, "t = f_drop(t, {position})"),
            TransformOp::Replace { position, old, new } => {
                write!(
                    f,
                    "t = f_replace(t, {position}, {}, {})",
                    quoted(old),
                    quoted(new)
                )
            }
        }
    }
}

/// Applies one operator, leaving every column it does not name untouched.
pub fn apply_op(table: &Table, op: &TransformOp) -> Result<Table, OpError> {
    let columns = table.column_count();
    let position_check = |position: usize, limit: usize| {
        if position >= limit {
            Err(OpError::PositionOutOfRange { position, columns })
        } else {
            Ok(())
        }
    };

    let rows = match op {
        TransformOp::JoinChar { position, glue } => {
            // Joining needs a right neighbor.
            position_check(*position + 1, columns)?;
            table
                .rows()
                .iter()
                .map(|row| {
                    let mut cells = Vec::with_capacity(columns - 1);
                    cells.extend(row[..*position].iter().cloned());
                    cells.push(format!("{}{}{}", row[*position], glue, row[*position + 1]));
                    cells.extend(row[*position + 2..].iter().cloned());
                    cells
                })
                .collect()
        }
        TransformOp::Split {
            position,
            delimiter,
        } => {
            if delimiter.is_empty() {
                return Err(OpError::EmptyDelimiter);
            }
            position_check(*position, columns)?;
            let mut counts = table
                .column(*position)
                .map(|cell| cell.matches(delimiter.as_str()).count());
            let first = counts.next().expect("tables are non-empty");
            for (i, count) in counts.enumerate() {
                if count != first {
                    return Err(OpError::RaggedSplit {
                        position: *position,
                        delimiter: delimiter.clone(),
                        first,
                        offending: count,
                        row: i + 1,
                    });
                }
            }
            table
                .rows()
                .iter()
                .map(|row| {
                    let mut cells = Vec::with_capacity(columns + first);
                    cells.extend(row[..*position].iter().cloned());
                    cells.extend(row[*position].split(delimiter.as_str()).map(str::to_string));
                    cells.extend(row[*position + 1..].iter().cloned());
                    cells
                })
                .collect()
        }
        TransformOp::Drop { position } => {
            position_check(*position, columns)?;
            if columns == 1 {
                // Removing the only column would leave no table at all.
                return Err(OpError::PositionOutOfRange {
                    position: *position,
                    columns,
                });
            }
            table
                .rows()
                .iter()
                .map(|row| {
                    let mut cells = row.clone();
                    cells.remove(*position);
                    cells
                })
                .collect()
        }
        TransformOp::Replace { position, old, new } => {
            if old.is_empty() {
                return Err(OpError::EmptyDelimiter);
            }
            position_check(*position, columns)?;
            table
                .rows()
                .iter()
                .map(|row| {
                    let mut cells = row.clone();
                    cells[*position] = cells[*position].replace(old.as_str(), new.as_str());
                    cells
                })
                .collect()
        }
    };
    Ok(Table::new(rows).expect("operators preserve rectangularity"))
}

/// An operator sequence; applying it to the example input yields the example
/// output (checked at synthesis exit).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Program {
    pub ops: Vec<TransformOp>,
}

impl Program {
    pub fn new(ops: Vec<TransformOp>) -> Program {
        Program { ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn run(&self, table: &Table) -> Result<Table, ProgramError> {
        run_program(self, table)
    }
}

/// Pseudocode rendering, one `t = f_...(t, ...)` line per operator. The empty
/// program renders as the identity line `t = I`.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops.is_empty() {
            return write!(f, "t = I");
        }
        for (i, op) in self.ops.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("step {step} ({op}): {source}")]
pub struct ProgramError {
    pub step: usize,
    pub op: TransformOp,
    pub source: OpError,
}

/// Left fold of [`apply_op`]; the empty program is the identity.
pub fn run_program(program: &Program, table: &Table) -> Result<Table, ProgramError> {
    let mut current = table.clone();
    for (step, op) in program.ops.iter().enumerate() {
        current = apply_op(&current, op).map_err(|source| ProgramError {
            step,
            op: op.clone(),
            source,
        })?;
    }
    Ok(current)
}
