//! Discovery of executable data-transformation programs from UI logs of
//! copy-paste routines.
//!
//! A UI log records the actions a user performs while transferring data from
//! one application to another (copying spreadsheet cells, pasting them into
//! the fields of a web form, editing the pasted values into shape). This crate
//! turns such logs into transformation programs over small string tables:
//!
//! 1. [`uilog`] parses the log from CSV, segments it into task traces by a
//!    known end action, and removes redundant actions with semantics-preserving
//!    filter rules.
//! 2. [`extract`] turns the filtered traces into transformation examples,
//!    either one per document or one per target field via copy/paste
//!    provenance.
//! 3. [`synth`] synthesizes a program of column operators (split, join, drop,
//!    replace) that maps example inputs to outputs, via A* search.
//! 4. [`tokenize`] computes symbolic structural patterns of input strings,
//!    used by [`pipeline`] to group examples so that each group can be solved
//!    from a single representative example.
//! 5. [`mod@bench`] generates synthetic logs of a student-records transfer
//!    routine and compares the three discovery strategies on them.
//!
//! ```
//! use copra::synth::{synthesize, SearchBudget, SearchMode, SynthesisOutcome, Table};
//!
//! let input = Table::new(vec![vec!["Albert".into(), "Rauf".into()]]).unwrap();
//! let output = Table::new(vec![vec!["Albert Rauf".into()]]).unwrap();
//! let outcome = synthesize(
//!     &[(input.clone(), output)],
//!     &SearchBudget::default(),
//!     SearchMode::Heuristic,
//! )
//! .unwrap();
//! let program = match outcome {
//!     SynthesisOutcome::Found { program, .. } => program,
//!     other => panic!("no program: {other:?}"),
//! };
//! assert_eq!(program.to_string(), "t = f_join_char(t, 0, ' ')");
//! ```

pub mod bench;
pub mod extract;
pub mod pipeline;
pub mod synth;
pub mod tokenize;
pub mod uilog;
