//! UI log model, CSV parsing, segmentation into task traces, and
//! semantics-preserving filtering of redundant actions.

mod filter;
mod parse;
mod replay;
mod segment;

pub use filter::{default_rules, filter_trace, ActionClass, ActionKind, FilterRule, RulePattern};
pub use parse::{parse_log, serialize_log, ParseError, ParseOptions};
pub use replay::{
    replay, replay_final_values, FieldValues, ReplayError, ReplayMode, ReplayOutcome,
};
pub use segment::{segment, EndActionSpec, SegmentError, Segmentation, SegmentationReport};

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

/// What the user did in a single log row.
///
/// The variants mirror the action-type labels emitted by UI recorders
/// ("Copy cell", "Click field", ...); labels that are none of the known
/// kinds are preserved in [`ActionType::Other`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActionType {
    CopyCell,
    ClickField,
    Paste,
    EditField,
    ClickCheckBox,
    ClickButton,
    Other(String),
}

impl ActionType {
    /// Parses the CSV label, falling back to `Other` for unknown labels.
    pub fn from_label(label: &str) -> ActionType {
        match label {
            "Copy cell" => ActionType::CopyCell,
            "Click field" => ActionType::ClickField,
            "Paste" => ActionType::Paste,
            "Edit field" => ActionType::EditField,
            "Click check box" => ActionType::ClickCheckBox,
            "Click button" => ActionType::ClickButton,
            other => ActionType::Other(other.to_string()),
        }
    }

    /// The CSV label for this action type.
    pub fn label(&self) -> &str {
        match self {
            ActionType::CopyCell => "Copy cell",
            ActionType::ClickField => "Click field",
            ActionType::Paste => "Paste",
            ActionType::EditField => "Edit field",
            ActionType::ClickCheckBox => "Click check box",
            ActionType::ClickButton => "Click button",
            ActionType::Other(label) => label,
        }
    }
}

/// The application an action was performed in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SourceApp {
    Worksheet,
    Web,
    Other(String),
}

impl SourceApp {
    pub fn from_label(label: &str) -> SourceApp {
        match label {
            "Worksheet" => SourceApp::Worksheet,
            "Web" => SourceApp::Web,
            other => SourceApp::Other(other.to_string()),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            SourceApp::Worksheet => "Worksheet",
            SourceApp::Web => "Web",
            SourceApp::Other(label) => label,
        }
    }
}

/// One row of a UI log.
///
/// `field_name` is a cell address ("A3") for worksheet actions and a form
/// field label ("Full Name") for web actions. `field_value` is the value of
/// that field at the time of the action: the value *after* the edit for
/// `EditField` rows, and a snapshot of the current value for click and paste
/// rows. `content` carries the clipboard payload of copy and paste actions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UiAction {
    pub timestamp: NaiveDateTime,
    pub action_type: ActionType,
    pub source_app: SourceApp,
    pub content: Option<String>,
    pub field_name: String,
    pub field_value: String,
    /// Columns beyond the canonical six, preserved in file order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_payload: Vec<(String, String)>,
}

impl UiAction {
    pub fn is_type(&self, action_type: &ActionType) -> bool {
        self.action_type == *action_type
    }
}

/// One execution of a task: the actions between two occurrences of the end
/// action, the last action being the end action itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskTrace {
    pub trace_id: usize,
    pub actions: Vec<UiAction>,
}

impl TaskTrace {
    pub fn new(trace_id: usize, actions: Vec<UiAction>) -> TaskTrace {
        TaskTrace { trace_id, actions }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}
