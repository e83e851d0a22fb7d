//! Extraction of transformation examples from filtered task traces.
//!
//! A transformation example pairs the values a user copied out of a source
//! document with the values that ended up in a target document. The
//! document-level form collects everything copied and everything written in
//! one trace; the per-target form follows copy/paste provenance to project
//! that onto a single target field: each paste into the field is resolved to
//! the most recent copy before it, which identifies the contributing source
//! cells and their values. Fields filled in manually (no paste) have no
//! traceable source and produce no examples.

use crate::uilog::{ActionType, TaskTrace};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A cell of the source document, e.g. worksheet cell `A3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceRef {
    pub document: String,
    pub locator: String,
}

/// A field of the target document, e.g. web form field `Full Name`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TargetRef {
    pub document: String,
    pub field: String,
}

/// Input values with their source cells, paired with output values and their
/// target fields. Inputs are ordered by first copy time within the trace,
/// outputs by last edit time. Per-target examples have exactly one output
/// cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformationExample {
    pub trace_id: usize,
    pub inputs: Vec<(SourceRef, String)>,
    pub output_cells: Vec<(TargetRef, String)>,
}

impl TransformationExample {
    /// Input values without their source refs, as one table row.
    pub fn input_values(&self) -> Vec<String> {
        self.inputs.iter().map(|(_, v)| v.clone()).collect()
    }

    /// Output values without their target refs, as one table row.
    pub fn output_values(&self) -> Vec<String> {
        self.output_cells.iter().map(|(_, v)| v.clone()).collect()
    }
}

/// How a target field received its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputMode {
    /// At least one paste contributed to the field before its last edit.
    PastedAndEdited,
    /// Typed in with no paste; the source is untraceable.
    ManualOnly,
}

/// A paste into a target field, resolved to the copy that filled the
/// clipboard.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PasteEvent {
    /// Index of the paste action within the trace.
    pub action_index: usize,
    /// The value that was on the clipboard.
    pub value: String,
    /// The cell the value was copied from.
    pub source: SourceRef,
}

/// Everything the trace tells us about one edited target field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetFieldHistory {
    pub target: TargetRef,
    pub pastes: Vec<PasteEvent>,
    pub final_value: String,
    pub input_mode: InputMode,
}

#[derive(Debug, Error)]
pub enum ExtractError {
    /// A paste with no preceding copy signals a filtering or segmentation
    /// defect.
    #[error("trace {trace_id}: paste at action {action_index} has no preceding copy")]
    OrphanPaste {
        trace_id: usize,
        action_index: usize,
    },
    #[error("trace {trace_id}: no copy actions, cannot build a document example")]
    EmptyExample { trace_id: usize },
}

/// One history per target field edited in the trace, ordered by last edit.
///
/// The final value is the `field_value` of the last edit of the field; each
/// paste into the field is resolved to the most recent copy preceding it.
pub fn extract_target_fields(trace: &TaskTrace) -> Result<Vec<TargetFieldHistory>, ExtractError> {
    struct FieldState {
        pastes: Vec<PasteEvent>,
        last_edit: Option<(usize, String)>,
    }

    let mut last_copy: Option<(SourceRef, String)> = None;
    let mut fields: IndexMap<TargetRef, FieldState> = IndexMap::new();

    for (index, action) in trace.actions.iter().enumerate() {
        match &action.action_type {
            ActionType::CopyCell => {
                if let Some(content) = &action.content {
                    last_copy = Some((
                        SourceRef {
                            document: action.source_app.label().to_string(),
                            locator: action.field_name.clone(),
                        },
                        content.clone(),
                    ));
                }
            }
            ActionType::Paste => {
                let (source, value) = last_copy.clone().ok_or(ExtractError::OrphanPaste {
                    trace_id: trace.trace_id,
                    action_index: index,
                })?;
                let target = TargetRef {
                    document: action.source_app.label().to_string(),
                    field: action.field_name.clone(),
                };
                fields
                    .entry(target)
                    .or_insert_with(|| FieldState {
                        pastes: Vec::new(),
                        last_edit: None,
                    })
                    .pastes
                    .push(PasteEvent {
                        action_index: index,
                        value,
                        source,
                    });
            }
            ActionType::EditField => {
                let target = TargetRef {
                    document: action.source_app.label().to_string(),
                    field: action.field_name.clone(),
                };
                fields
                    .entry(target)
                    .or_insert_with(|| FieldState {
                        pastes: Vec::new(),
                        last_edit: None,
                    })
                    .last_edit = Some((index, action.field_value.clone()));
            }
            _ => {}
        }
    }

    // Target fields are the edited ones; pastes into never-edited fields
    // contributed nothing observable.
    let mut histories: Vec<(usize, TargetFieldHistory)> = fields
        .into_iter()
        .filter_map(|(target, state)| {
            let (edit_index, final_value) = state.last_edit?;
            let input_mode = if state.pastes.is_empty() {
                InputMode::ManualOnly
            } else {
                InputMode::PastedAndEdited
            };
            Some((
                edit_index,
                TargetFieldHistory {
                    target,
                    pastes: state.pastes,
                    final_value,
                    input_mode,
                },
            ))
        })
        .collect();
    histories.sort_by_key(|(edit_index, _)| *edit_index);
    Ok(histories.into_iter().map(|(_, h)| h).collect())
}

/// One transformation example per trace and pasted-into target field.
///
/// Inputs are the distinct copied sources of the field's pastes, in paste
/// order, with repeated pastes from the same source collapsed to the last
/// copied value; the output is the field's final value. Manual-only fields
/// produce nothing. Targets are keyed in order of first appearance.
pub fn extract_examples_per_target(
    traces: &[TaskTrace],
) -> Result<IndexMap<TargetRef, Vec<TransformationExample>>, ExtractError> {
    let mut by_target: IndexMap<TargetRef, Vec<TransformationExample>> = IndexMap::new();
    for trace in traces {
        for history in extract_target_fields(trace)? {
            if history.input_mode == InputMode::ManualOnly {
                continue;
            }
            let mut inputs: IndexMap<SourceRef, String> = IndexMap::new();
            for paste in &history.pastes {
                inputs.insert(paste.source.clone(), paste.value.clone());
            }
            let example = TransformationExample {
                trace_id: trace.trace_id,
                inputs: inputs.into_iter().collect(),
                output_cells: vec![(history.target.clone(), history.final_value.clone())],
            };
            by_target.entry(history.target).or_default().push(example);
        }
    }
    Ok(by_target)
}

/// Options for document-example construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DocumentExampleOptions {
    /// Also emit manual-only fields as outputs. Their sources are
    /// untraceable, so this is for diagnostics, not synthesis.
    pub include_manual_outputs: bool,
}

/// The whole-document example of one trace: every distinct copied
/// (source, value) pair in first-copy order against the final values of
/// every pasted-into target field in last-edit order.
pub fn build_document_example(trace: &TaskTrace) -> Result<TransformationExample, ExtractError> {
    build_document_example_with(trace, DocumentExampleOptions::default())
}

/// [`build_document_example`] with explicit options.
pub fn build_document_example_with(
    trace: &TaskTrace,
    options: DocumentExampleOptions,
) -> Result<TransformationExample, ExtractError> {
    let mut inputs: Vec<(SourceRef, String)> = Vec::new();
    for action in &trace.actions {
        if action.action_type != ActionType::CopyCell {
            continue;
        }
        let Some(content) = &action.content else {
            continue;
        };
        let input = (
            SourceRef {
                document: action.source_app.label().to_string(),
                locator: action.field_name.clone(),
            },
            content.clone(),
        );
        if !inputs.contains(&input) {
            inputs.push(input);
        }
    }
    if inputs.is_empty() {
        return Err(ExtractError::EmptyExample {
            trace_id: trace.trace_id,
        });
    }
    let output_cells = extract_target_fields(trace)?
        .into_iter()
        .filter(|h| {
            options.include_manual_outputs || h.input_mode == InputMode::PastedAndEdited
        })
        .map(|h| (h.target, h.final_value))
        .collect();
    Ok(TransformationExample {
        trace_id: trace.trace_id,
        inputs,
        output_cells,
    })
}

/// JSON export shape for per-target examples:
/// `{trace_id, target: {document, field}, inputs: [{document, locator, value}], output}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExampleExport {
    pub trace_id: usize,
    pub target: TargetRef,
    pub inputs: Vec<ExportedInput>,
    pub output: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExportedInput {
    pub document: String,
    pub locator: String,
    pub value: String,
}

/// Flattens a per-target example map into its JSON export form.
pub fn export_examples(
    by_target: &IndexMap<TargetRef, Vec<TransformationExample>>,
) -> Vec<ExampleExport> {
    let mut exports = Vec::new();
    for (target, examples) in by_target {
        for example in examples {
            exports.push(ExampleExport {
                trace_id: example.trace_id,
                target: target.clone(),
                inputs: example
                    .inputs
                    .iter()
                    .map(|(source, value)| ExportedInput {
                        document: source.document.clone(),
                        locator: source.locator.clone(),
                        value: value.clone(),
                    })
                    .collect(),
                output: example
                    .output_cells
                    .first()
                    .map(|(_, v)| v.clone())
                    .unwrap_or_default(),
            });
        }
    }
    exports
}
