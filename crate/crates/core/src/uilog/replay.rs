//! Clipboard and field-state simulation over a task trace.
//!
//! Replay is the oracle for the filter rules: applying a semantics-preserving
//! rule must not change the replay-final value of any edited field. Strict
//! mode additionally validates the snapshot discipline of a recorded log and
//! is used for fixture validation; lenient mode downgrades inconsistencies to
//! warnings.

use super::{ActionType, TaskTrace};
use std::collections::BTreeMap;
use thiserror::Error;

/// Final value per edited field, ordered by field name.
pub type FieldValues = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReplayMode {
    #[default]
    Lenient,
    Strict,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("action {index}: {detail}")]
    Inconsistency { index: usize, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayOutcome {
    pub values: FieldValues,
    /// Inconsistencies observed in lenient mode.
    pub warnings: Vec<ReplayError>,
}

/// Simulates clipboard and field state action by action.
///
/// State rules: a copy sets the clipboard from its content; an edit sets its
/// field to the edit's `field_value`; click and paste rows carry snapshots of
/// the field value at action time. A field first seen via a snapshot is
/// initialized from that snapshot (web forms may be prefilled).
///
/// Strict-mode checks, each reported with the offending action index:
/// copies must carry content; a paste's content must equal the current
/// clipboard; snapshot values on click/paste rows must match the simulated
/// field state; an edit must actually change the simulated field value.
pub fn replay(trace: &TaskTrace, mode: ReplayMode) -> Result<ReplayOutcome, ReplayError> {
    let mut clipboard: Option<String> = None;
    let mut fields: BTreeMap<String, String> = BTreeMap::new();
    let mut edited: FieldValues = BTreeMap::new();
    let mut warnings = Vec::new();

    let report = |index: usize, detail: String, warnings: &mut Vec<ReplayError>| {
        let error = ReplayError::Inconsistency { index, detail };
        if mode == ReplayMode::Strict {
            Err(error)
        } else {
            warnings.push(error);
            Ok(())
        }
    };

    for (index, action) in trace.actions.iter().enumerate() {
        match &action.action_type {
            ActionType::CopyCell => match &action.content {
                Some(content) if !content.is_empty() => clipboard = Some(content.clone()),
                _ => report(index, "copy action with empty content".into(), &mut warnings)?,
            },
            ActionType::Paste => {
                let field = action.field_name.clone();
                let simulated = fields
                    .entry(field)
                    .or_insert_with(|| action.field_value.clone());
                if *simulated != action.field_value {
                    report(
                        index,
                        format!(
                            "paste snapshot {:?} does not match simulated value {:?} of field {:?}",
                            action.field_value, simulated, action.field_name
                        ),
                        &mut warnings,
                    )?;
                }
                match (&action.content, &clipboard) {
                    (Some(content), Some(clip)) if content == clip => {}
                    (_, None) => {
                        report(index, "paste with empty clipboard".into(), &mut warnings)?
                    }
                    (content, Some(clip)) => report(
                        index,
                        format!(
                            "paste content {:?} does not match clipboard {:?}",
                            content.as_deref().unwrap_or(""),
                            clip
                        ),
                        &mut warnings,
                    )?,
                }
            }
            ActionType::ClickField | ActionType::ClickCheckBox => {
                let simulated = fields
                    .entry(action.field_name.clone())
                    .or_insert_with(|| action.field_value.clone());
                if *simulated != action.field_value {
                    report(
                        index,
                        format!(
                            "click snapshot {:?} does not match simulated value {:?} of field {:?}",
                            action.field_value, simulated, action.field_name
                        ),
                        &mut warnings,
                    )?;
                }
            }
            ActionType::EditField => {
                if let Some(current) = fields.get(&action.field_name) {
                    if *current == action.field_value {
                        report(
                            index,
                            format!(
                                "edit of field {:?} does not change its value {:?}",
                                action.field_name, action.field_value
                            ),
                            &mut warnings,
                        )?;
                    }
                }
                fields.insert(action.field_name.clone(), action.field_value.clone());
                edited.insert(action.field_name.clone(), action.field_value.clone());
            }
            ActionType::ClickButton | ActionType::Other(_) => {}
        }
    }
    Ok(ReplayOutcome {
        values: edited,
        warnings,
    })
}

/// Final field values under lenient replay.
pub fn replay_final_values(trace: &TaskTrace) -> FieldValues {
    replay(trace, ReplayMode::Lenient)
        .expect("lenient replay cannot fail")
        .values
}
