//! Rectangular tables of string cells.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::hash::{Hash, Hasher};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("table rows have unequal lengths ({first} vs {offending} at row {row})")]
    Ragged {
        first: usize,
        offending: usize,
        row: usize,
    },
    #[error("table has no rows")]
    Empty,
    #[error("table rows have no columns")]
    NoColumns,
}

/// A non-empty rectangular table; every row has the same number of columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<String>>", into = "Vec<Vec<String>>")]
pub struct Table {
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(rows: Vec<Vec<String>>) -> Result<Table, TableError> {
        let Some(first) = rows.first() else {
            return Err(TableError::Empty);
        };
        let columns = first.len();
        if columns == 0 {
            return Err(TableError::NoColumns);
        }
        for (row, cells) in rows.iter().enumerate().skip(1) {
            if cells.len() != columns {
                return Err(TableError::Ragged {
                    first: columns,
                    offending: cells.len(),
                    row,
                });
            }
        }
        Ok(Table { rows })
    }

    /// Single-row table from one example's cell values.
    pub fn from_row(cells: Vec<String>) -> Result<Table, TableError> {
        Table::new(vec![cells])
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.rows[0].len()
    }

    pub fn column(&self, position: usize) -> impl Iterator<Item = &str> {
        self.rows.iter().map(move |row| row[position].as_str())
    }

    /// Stacks tables with equal column counts into one, top to bottom.
    pub fn stack(tables: &[Table]) -> Result<Table, TableError> {
        let Some(first) = tables.first() else {
            return Err(TableError::Empty);
        };
        let columns = first.column_count();
        let mut rows = Vec::new();
        for (i, table) in tables.iter().enumerate() {
            if table.column_count() != columns {
                return Err(TableError::Ragged {
                    first: columns,
                    offending: table.column_count(),
                    row: i,
                });
            }
            rows.extend(table.rows.iter().cloned());
        }
        Table::new(rows)
    }

    /// Feeds the row-major cell list, prefixed with the shape, into a hasher.
    /// Used for canonical state fingerprints during search.
    pub fn hash_canonical<H: Hasher>(&self, hasher: &mut H) {
        self.column_count().hash(hasher);
        self.row_count().hash(hasher);
        for row in &self.rows {
            for cell in row {
                cell.hash(hasher);
            }
        }
    }
}

impl TryFrom<Vec<Vec<String>>> for Table {
    type Error = TableError;

    fn try_from(rows: Vec<Vec<String>>) -> Result<Table, TableError> {
        Table::new(rows)
    }
}

impl From<Table> for Vec<Vec<String>> {
    fn from(table: Table) -> Vec<Vec<String>> {
        table.rows
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "[{}]", row.join(" | "))?;
        }
        Ok(())
    }
}

/// Builds a table from string literals in tests and fixtures.
#[macro_export]
macro_rules! table {
    ($([$($cell:expr),+ $(,)?]),+ $(,)?) => {
        $crate::synth::Table::new(vec![
            $(vec![$($cell.to_string()),+]),+
        ]).expect("literal table is rectangular")
    };
}
