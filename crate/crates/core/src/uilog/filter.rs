//! Removal of redundant actions from task traces.
//!
//! A rule names a pattern of actions that makes an earlier action redundant
//! (a copy superseded by another copy before any paste, a field selection
//! superseded by another selection, a double edit, a worksheet click that
//! never leads to a copy). Applying the default rule set never changes the
//! replay-final value of any target field; `replay_final_values` is the
//! oracle for that, exercised by the property tests.

use super::{ActionType, SourceApp, TaskTrace, UiAction};

/// Action kinds a rule can match on, ignoring payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionKind {
    Copy,
    ClickField,
    Paste,
    Edit,
    ClickCheckBox,
    ClickButton,
}

impl ActionKind {
    fn matches(self, action_type: &ActionType) -> bool {
        matches!(
            (self, action_type),
            (ActionKind::Copy, ActionType::CopyCell)
                | (ActionKind::ClickField, ActionType::ClickField)
                | (ActionKind::Paste, ActionType::Paste)
                | (ActionKind::Edit, ActionType::EditField)
                | (ActionKind::ClickCheckBox, ActionType::ClickCheckBox)
                | (ActionKind::ClickButton, ActionType::ClickButton)
        )
    }
}

/// A class of actions: any of the listed kinds, optionally restricted to one
/// source application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionClass {
    pub kinds: Vec<ActionKind>,
    pub source: Option<SourceApp>,
}

impl ActionClass {
    pub fn of(kinds: &[ActionKind]) -> ActionClass {
        ActionClass {
            kinds: kinds.to_vec(),
            source: None,
        }
    }

    pub fn from_source(kinds: &[ActionKind], source: SourceApp) -> ActionClass {
        ActionClass {
            kinds: kinds.to_vec(),
            source: Some(source),
        }
    }

    fn matches(&self, action: &UiAction) -> bool {
        self.kinds.iter().any(|k| k.matches(&action.action_type))
            && self
                .source
                .as_ref()
                .is_none_or(|s| *s == action.source_app)
    }
}

/// Declarative pattern over consecutive actions of a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RulePattern {
    /// An `earlier` action is redundant once a `later` action occurs with no
    /// `unless_between` action in between: the earlier one is dropped, the
    /// later one kept. With `same_field`, the two anchors must address the
    /// same field and only `unless_between` actions on that field block the
    /// match.
    SupersededBy {
        earlier: ActionClass,
        later: ActionClass,
        unless_between: ActionClass,
        same_field: bool,
    },
    /// An action is redundant unless a `required` action follows it before
    /// the next `barrier` action (or the end of the trace).
    Dangling {
        action: ActionClass,
        required: ActionClass,
        barrier: ActionClass,
    },
}

/// A named redundancy pattern; matched actions are dropped from the trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterRule {
    pub name: String,
    pub pattern: RulePattern,
}

impl FilterRule {
    pub fn new(name: impl Into<String>, pattern: RulePattern) -> FilterRule {
        FilterRule {
            name: name.into(),
            pattern,
        }
    }

    /// Indices of actions this rule makes redundant in `actions`.
    fn redundant_indices(&self, actions: &[UiAction]) -> Vec<usize> {
        let mut drops = Vec::new();
        match &self.pattern {
            RulePattern::SupersededBy {
                earlier,
                later,
                unless_between,
                same_field,
            } => {
                for i in 0..actions.len() {
                    if !earlier.matches(&actions[i]) {
                        continue;
                    }
                    let field = &actions[i].field_name;
                    for candidate in &actions[i + 1..] {
                        let field_ok = !same_field || candidate.field_name == *field;
                        if unless_between.matches(candidate) && field_ok {
                            break;
                        }
                        if later.matches(candidate) && field_ok {
                            drops.push(i);
                            break;
                        }
                    }
                }
            }
            RulePattern::Dangling {
                action,
                required,
                barrier,
            } => {
                for i in 0..actions.len() {
                    if !action.matches(&actions[i]) {
                        continue;
                    }
                    let mut satisfied = false;
                    for candidate in &actions[i + 1..] {
                        if required.matches(candidate) {
                            satisfied = true;
                            break;
                        }
                        if barrier.matches(candidate) {
                            break;
                        }
                    }
                    if !satisfied {
                        drops.push(i);
                    }
                }
            }
        }
        drops
    }
}

const ANY_CLICK: [ActionKind; 3] = [
    ActionKind::ClickField,
    ActionKind::ClickCheckBox,
    ActionKind::ClickButton,
];

/// The default rule set.
pub fn default_rules() -> Vec<FilterRule> {
    vec![
        // Two consecutive copy actions without a paste in between: the first
        // copy is never read.
        FilterRule::new(
            "redundant-copy",
            RulePattern::SupersededBy {
                earlier: ActionClass::of(&[ActionKind::Copy]),
                later: ActionClass::of(&[ActionKind::Copy]),
                unless_between: ActionClass::of(&[ActionKind::Paste]),
                same_field: false,
            },
        ),
        // A field selection followed by another selection with no paste or
        // edit in between is pure navigation.
        FilterRule::new(
            "redundant-field-click",
            RulePattern::SupersededBy {
                earlier: ActionClass::of(&[ActionKind::ClickField]),
                later: ActionClass::of(&[ActionKind::ClickField]),
                unless_between: ActionClass::of(&[ActionKind::Paste, ActionKind::Edit]),
                same_field: false,
            },
        ),
        // Double editing of a field with replacement: only the last edit
        // determines the field value.
        FilterRule::new(
            "double-edit",
            RulePattern::SupersededBy {
                earlier: ActionClass::of(&[ActionKind::Edit]),
                later: ActionClass::of(&[ActionKind::Edit]),
                unless_between: ActionClass::of(&[ActionKind::Paste]),
                same_field: true,
            },
        ),
        // Navigating across worksheet cells without copying their content.
        FilterRule::new(
            "copyless-cell-selection",
            RulePattern::Dangling {
                action: ActionClass::from_source(&[ActionKind::ClickField], SourceApp::Worksheet),
                required: ActionClass::of(&[ActionKind::Copy]),
                barrier: ActionClass::of(&ANY_CLICK),
            },
        ),
    ]
}

/// Removes redundant actions from a trace, iterating the rules to a fixed
/// point. The result is stable: filtering a filtered trace is a no-op.
pub fn filter_trace(trace: &TaskTrace, rules: &[FilterRule]) -> TaskTrace {
    let mut actions = trace.actions.clone();
    loop {
        let mut changed = false;
        for rule in rules {
            let drops = rule.redundant_indices(&actions);
            if !drops.is_empty() {
                changed = true;
                let mut kept = Vec::with_capacity(actions.len() - drops.len());
                for (i, action) in actions.drain(..).enumerate() {
                    if !drops.contains(&i) {
                        kept.push(action);
                    }
                }
                actions = kept;
            }
        }
        if !changed {
            break;
        }
    }
    TaskTrace::new(trace.trace_id, actions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uilog::replay_final_values;
    use chrono::NaiveDateTime;

    fn ts(secs: u32) -> NaiveDateTime {
        let base = NaiveDateTime::parse_from_str("2019-03-03T19:00:00", "%Y-%m-%dT%H:%M:%S");
        base.unwrap() + chrono::Duration::seconds(secs as i64)
    }

    fn action(
        secs: u32,
        action_type: ActionType,
        source: SourceApp,
        content: Option<&str>,
        field: &str,
        value: &str,
    ) -> UiAction {
        UiAction {
            timestamp: ts(secs),
            action_type,
            source_app: source,
            content: content.map(str::to_string),
            field_name: field.to_string(),
            field_value: value.to_string(),
            extra_payload: Vec::new(),
        }
    }

    fn copy(secs: u32, cell: &str, value: &str) -> UiAction {
        action(
            secs,
            ActionType::CopyCell,
            SourceApp::Worksheet,
            Some(value),
            cell,
            value,
        )
    }

    fn paste(secs: u32, field: &str, content: &str, current: &str) -> UiAction {
        action(
            secs,
            ActionType::Paste,
            SourceApp::Web,
            Some(content),
            field,
            current,
        )
    }

    fn edit(secs: u32, field: &str, value: &str) -> UiAction {
        action(secs, ActionType::EditField, SourceApp::Web, None, field, value)
    }

    fn click(secs: u32, source: SourceApp, field: &str, value: &str) -> UiAction {
        action(secs, ActionType::ClickField, source, None, field, value)
    }

    #[test]
    fn consecutive_copies_keep_the_last() {
        let trace = TaskTrace::new(
            0,
            vec![
                copy(0, "A1", "X"),
                copy(1, "A2", "Y"),
                paste(2, "F", "Y", ""),
            ],
        );
        let filtered = filter_trace(&trace, &default_rules());
        assert_eq!(filtered.actions.len(), 2);
        assert_eq!(filtered.actions[0].content.as_deref(), Some("Y"));
        assert_eq!(filtered.actions[1].action_type, ActionType::Paste);
    }

    #[test]
    fn trace_without_redundancy_is_unchanged() {
        let trace = TaskTrace::new(
            0,
            vec![
                copy(0, "A1", "X"),
                click(1, SourceApp::Web, "F", ""),
                paste(2, "F", "X", ""),
                edit(3, "F", "X"),
            ],
        );
        let filtered = filter_trace(&trace, &default_rules());
        assert_eq!(filtered, trace);
    }

    #[test]
    fn double_edit_keeps_the_last() {
        let trace = TaskTrace::new(
            0,
            vec![
                copy(0, "A1", "abcd"),
                paste(1, "F", "abcd", ""),
                edit(2, "F", "abc"),
                edit(3, "F", "abcd"),
            ],
        );
        let filtered = filter_trace(&trace, &default_rules());
        let edits: Vec<_> = filtered
            .actions
            .iter()
            .filter(|a| a.action_type == ActionType::EditField)
            .collect();
        assert_eq!(edits.len(), 1);
        assert_eq!(edits[0].field_value, "abcd");
    }

    #[test]
    fn paste_between_edits_blocks_double_edit_rule() {
        // The "Albert" / "Albert Rauf" shape: both edits must survive.
        let trace = TaskTrace::new(
            0,
            vec![
                copy(0, "A3", "Albert"),
                paste(1, "Full Name", "Albert", ""),
                edit(2, "Full Name", "Albert"),
                copy(3, "B3", "Rauf"),
                paste(4, "Full Name", "Rauf", "Albert"),
                edit(5, "Full Name", "Albert Rauf"),
            ],
        );
        let filtered = filter_trace(&trace, &default_rules());
        assert_eq!(filtered, trace);
    }

    #[test]
    fn worksheet_click_without_copy_is_dropped() {
        let trace = TaskTrace::new(
            0,
            vec![
                click(0, SourceApp::Worksheet, "A1", "X"),
                click(1, SourceApp::Worksheet, "A2", "Y"),
                copy(2, "A2", "Y"),
                paste(3, "F", "Y", ""),
                edit(4, "F", "Y"),
            ],
        );
        let filtered = filter_trace(&trace, &default_rules());
        // The A1 click never leads to a copy; the A2 click does but is then
        // superseded navigation once the copy itself records the cell.
        assert!(filtered
            .actions
            .iter()
            .all(|a| a.field_name != "A1" || a.action_type == ActionType::CopyCell));
    }

    #[test]
    fn redundant_web_click_is_dropped() {
        let trace = TaskTrace::new(
            0,
            vec![
                copy(0, "A1", "X"),
                click(1, SourceApp::Web, "F", ""),
                click(2, SourceApp::Web, "G", ""),
                paste(3, "G", "X", ""),
                edit(4, "G", "X"),
            ],
        );
        let filtered = filter_trace(&trace, &default_rules());
        assert!(!filtered.actions.iter().any(|a| a.field_name == "F"));
        assert_eq!(filtered.actions.len(), 4);
    }

    #[test]
    fn filtering_is_idempotent_and_replay_preserving() {
        let trace = TaskTrace::new(
            0,
            vec![
                copy(0, "A1", "junk"),
                copy(1, "A2", "X"),
                click(2, SourceApp::Web, "F", ""),
                paste(3, "F", "X", ""),
                edit(4, "F", "Xy"),
                edit(5, "F", "X y"),
            ],
        );
        let rules = default_rules();
        let once = filter_trace(&trace, &rules);
        let twice = filter_trace(&once, &rules);
        assert_eq!(once, twice);
        assert_eq!(replay_final_values(&trace), replay_final_values(&once));
    }
}
