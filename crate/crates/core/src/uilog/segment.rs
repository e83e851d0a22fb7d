//! Splitting a UI log into task traces at a known end action.

use super::{ActionType, TaskTrace, UiAction};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The action that terminates every task trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndActionSpec {
    pub action_type: ActionType,
    pub field_name: String,
}

impl EndActionSpec {
    pub fn new(action_type: ActionType, field_name: impl Into<String>) -> EndActionSpec {
        EndActionSpec {
            action_type,
            field_name: field_name.into(),
        }
    }

    pub fn matches(&self, action: &UiAction) -> bool {
        action.action_type == self.action_type && action.field_name == self.field_name
    }
}

/// Pressing the Submit button.
impl Default for EndActionSpec {
    fn default() -> Self {
        EndActionSpec::new(ActionType::ClickButton, "Submit")
    }
}

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error("no traces found: the end action never occurs in the log")]
    NoTracesFound,
}

/// Result of segmenting a log: the traces plus any trailing actions after
/// the last end action. Real recordings often stop mid-task, so the trailing
/// fragment is kept around for reporting rather than treated as an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    pub traces: Vec<TaskTrace>,
    pub dropped_trailing: Vec<UiAction>,
}

impl Segmentation {
    pub fn report(&self) -> SegmentationReport {
        SegmentationReport {
            trace_count: self.traces.len(),
            dropped_action_count: self.dropped_trailing.len(),
        }
    }
}

/// Summary of a segmentation, exported as JSON by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentationReport {
    pub trace_count: usize,
    pub dropped_action_count: usize,
}

/// Partitions the log at each occurrence of the end action (inclusive).
///
/// Every returned trace ends with the end action; a trailing fragment with no
/// end action is dropped into [`Segmentation::dropped_trailing`].
pub fn segment(log: &[UiAction], end_action: &EndActionSpec) -> Result<Segmentation, SegmentError> {
    let mut traces = Vec::new();
    let mut current = Vec::new();
    for action in log {
        current.push(action.clone());
        if end_action.matches(action) {
            traces.push(TaskTrace::new(traces.len(), std::mem::take(&mut current)));
        }
    }
    if traces.is_empty() {
        return Err(SegmentError::NoTracesFound);
    }
    Ok(Segmentation {
        traces,
        dropped_trailing: current,
    })
}
