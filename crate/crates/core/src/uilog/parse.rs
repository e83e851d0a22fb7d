//! CSV parsing and serialization of UI logs.
//!
//! The canonical schema is a header row of
//! `Timestamp, Action Type, Source, Content, Field name, Field value`
//! followed by one row per action. Extra columns are allowed and preserved
//! in [`UiAction::extra_payload`], so `parse_log` followed by
//! [`serialize_log`] reproduces a canonical-form file byte for byte.

use super::{ActionType, SourceApp, UiAction};
use chrono::NaiveDateTime;
use thiserror::Error;

const REQUIRED_COLUMNS: [&str; 4] = ["Timestamp", "Action Type", "Source", "Field name"];
const CANONICAL_COLUMNS: [&str; 6] = [
    "Timestamp",
    "Action Type",
    "Source",
    "Content",
    "Field name",
    "Field value",
];

/// Default timestamp format: ISO-8601 without timezone, e.g.
/// `2019-03-03T19:02:18`.
pub const DEFAULT_TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// chrono format string for the Timestamp column.
    pub timestamp_format: String,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            timestamp_format: DEFAULT_TIMESTAMP_FORMAT.to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
    #[error("row {row}: missing required column {column:?}")]
    MissingColumn { row: u64, column: &'static str },
    #[error("row {row}: unparseable timestamp {value:?}")]
    BadTimestamp { row: u64, value: String },
    #[error("row {row}: timestamp {value} decreases (previous {previous})")]
    NonMonotonicTimestamp {
        row: u64,
        value: NaiveDateTime,
        previous: NaiveDateTime,
    },
}

/// Parses a UI log from CSV bytes into actions in file order.
///
/// Empty `Content` cells become `None`; empty `Field name` / `Field value`
/// cells become empty strings. Timestamps must be non-decreasing (ties are
/// allowed, recorders emit them for near-simultaneous events).
pub fn parse_log(csv_bytes: &[u8], options: &ParseOptions) -> Result<Vec<UiAction>, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(csv_bytes);

    let headers = reader
        .headers()
        .map_err(|e| ParseError::MalformedCsv(e.to_string()))?
        .clone();
    for required in REQUIRED_COLUMNS {
        if !headers.iter().any(|h| h == required) {
            return Err(ParseError::MalformedCsv(format!(
                "header is missing required column {required:?}"
            )));
        }
    }
    let column_index = |name: &str| headers.iter().position(|h| h == name);
    let extra_columns: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter(|(_, h)| !CANONICAL_COLUMNS.contains(h))
        .map(|(i, h)| (i, h.to_string()))
        .collect();

    let ts_idx = column_index("Timestamp").unwrap();
    let type_idx = column_index("Action Type").unwrap();
    let source_idx = column_index("Source").unwrap();
    let content_idx = column_index("Content");
    let field_name_idx = column_index("Field name").unwrap();
    let field_value_idx = column_index("Field value");

    let mut actions = Vec::new();
    let mut previous_ts: Option<NaiveDateTime> = None;
    for (i, record) in reader.records().enumerate() {
        // 1-based data row number, for error messages.
        let row = i as u64 + 1;
        let record = record.map_err(|e| ParseError::MalformedCsv(e.to_string()))?;
        let get = |idx: usize| record.get(idx).unwrap_or("");

        let raw_ts = get(ts_idx).trim();
        let timestamp = NaiveDateTime::parse_from_str(raw_ts, &options.timestamp_format).map_err(
            |_| ParseError::BadTimestamp {
                row,
                value: raw_ts.to_string(),
            },
        )?;
        if let Some(previous) = previous_ts {
            if timestamp < previous {
                return Err(ParseError::NonMonotonicTimestamp {
                    row,
                    value: timestamp,
                    previous,
                });
            }
        }
        previous_ts = Some(timestamp);

        let content = match content_idx.map(get) {
            Some("") | None => None,
            Some(value) => Some(value.to_string()),
        };
        actions.push(UiAction {
            timestamp,
            action_type: ActionType::from_label(get(type_idx).trim()),
            source_app: SourceApp::from_label(get(source_idx).trim()),
            content,
            field_name: get(field_name_idx).to_string(),
            field_value: field_value_idx.map(get).unwrap_or("").to_string(),
            extra_payload: extra_columns
                .iter()
                .map(|(idx, name)| (name.clone(), get(*idx).to_string()))
                .collect(),
        });
    }
    Ok(actions)
}

/// Serializes actions back to the canonical CSV schema.
///
/// Extra payload columns are appended after the six canonical ones, in order
/// of first appearance across the log.
pub fn serialize_log(actions: &[UiAction], options: &ParseOptions) -> Vec<u8> {
    let mut extra_names: Vec<&str> = Vec::new();
    for action in actions {
        for (name, _) in &action.extra_payload {
            if !extra_names.contains(&name.as_str()) {
                extra_names.push(name);
            }
        }
    }

    let mut writer = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = CANONICAL_COLUMNS
        .iter()
        .copied()
        .chain(extra_names.iter().copied())
        .collect();
    writer.write_record(&header).expect("write to Vec");
    for action in actions {
        let mut record: Vec<String> = vec![
            action.timestamp.format(&options.timestamp_format).to_string(),
            action.action_type.label().to_string(),
            action.source_app.label().to_string(),
            action.content.clone().unwrap_or_default(),
            action.field_name.clone(),
            action.field_value.clone(),
        ];
        for name in &extra_names {
            let value = action
                .extra_payload
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.clone())
                .unwrap_or_default();
            record.push(value);
        }
        writer.write_record(&record).expect("write to Vec");
    }
    writer.into_inner().expect("flush to Vec")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1_CSV: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/testdata/student_trace.csv"
    ));

    #[test]
    fn parses_copy_cell_row() {
        let csv = "Timestamp,Action Type,Source,Content,Field name,Field value\n\
                   2019-03-03T19:02:18,Copy cell,Worksheet,\"Albert\",A3,\"Albert\"\n";
        let actions = parse_log(csv.as_bytes(), &ParseOptions::default()).unwrap();
        assert_eq!(actions.len(), 1);
        let action = &actions[0];
        assert_eq!(action.action_type, ActionType::CopyCell);
        assert_eq!(action.source_app, SourceApp::Worksheet);
        assert_eq!(action.content.as_deref(), Some("Albert"));
        assert_eq!(action.field_name, "A3");
        assert_eq!(action.field_value, "Albert");
    }

    #[test]
    fn header_only_file_yields_empty_list() {
        let csv = "Timestamp,Action Type,Source,Content,Field name,Field value\n";
        let actions = parse_log(csv.as_bytes(), &ParseOptions::default()).unwrap();
        assert!(actions.is_empty());
    }

    #[test]
    fn click_button_row_has_no_content() {
        let csv = "Timestamp,Action Type,Source,Content,Field name,Field value\n\
                   2019-03-03T19:04:45,Click button,Web,,Submit,\n";
        let actions = parse_log(csv.as_bytes(), &ParseOptions::default()).unwrap();
        assert_eq!(actions[0].action_type, ActionType::ClickButton);
        assert_eq!(actions[0].field_name, "Submit");
        assert_eq!(actions[0].content, None);
        assert_eq!(actions[0].field_value, "");
    }

    #[test]
    fn parses_full_student_trace() {
        let actions = parse_log(TABLE1_CSV.as_bytes(), &ParseOptions::default()).unwrap();
        assert_eq!(actions.len(), 42);
        assert_eq!(
            actions[24].content.as_deref(),
            Some("99 Beacon Rd, Port Melbourne, VIC 3207, Australia")
        );
        // Rows 40 and 41 share a timestamp; ties must parse.
        assert_eq!(actions[39].timestamp, actions[40].timestamp);
    }

    #[test]
    fn bad_timestamp_reports_row_number() {
        let csv = "Timestamp,Action Type,Source,Content,Field name,Field value\n\
                   2019-03-03T19:02:18,Copy cell,Worksheet,a,A3,a\n\
                   not-a-date,Paste,Web,a,F,\n";
        let err = parse_log(csv.as_bytes(), &ParseOptions::default()).unwrap_err();
        match err {
            ParseError::BadTimestamp { row, value } => {
                assert_eq!(row, 2);
                assert_eq!(value, "not-a-date");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn decreasing_timestamps_rejected() {
        let csv = "Timestamp,Action Type,Source,Content,Field name,Field value\n\
                   2019-03-03T19:02:18,Copy cell,Worksheet,a,A3,a\n\
                   2019-03-03T19:02:17,Paste,Web,a,F,\n";
        let err = parse_log(csv.as_bytes(), &ParseOptions::default()).unwrap_err();
        assert!(matches!(err, ParseError::NonMonotonicTimestamp { row: 2, .. }));
    }

    #[test]
    fn missing_required_column_rejected() {
        let csv = "Timestamp,Source,Content,Field name,Field value\n";
        let err = parse_log(csv.as_bytes(), &ParseOptions::default()).unwrap_err();
        assert!(matches!(err, ParseError::MalformedCsv(_)));
    }

    #[test]
    fn ragged_row_rejected() {
        let csv = "Timestamp,Action Type,Source,Content,Field name,Field value\n\
                   2019-03-03T19:02:18,Copy cell,Worksheet\n";
        let err = parse_log(csv.as_bytes(), &ParseOptions::default()).unwrap_err();
        assert!(matches!(err, ParseError::MalformedCsv(_)));
    }

    #[test]
    fn extra_columns_round_trip() {
        let csv = "Timestamp,Action Type,Source,Content,Field name,Field value,Window Title\n\
                   2019-03-03T19:02:18,Copy cell,Worksheet,Albert,A3,Albert,Students.xlsx\n";
        let options = ParseOptions::default();
        let actions = parse_log(csv.as_bytes(), &options).unwrap();
        assert_eq!(
            actions[0].extra_payload,
            vec![("Window Title".to_string(), "Students.xlsx".to_string())]
        );
        let serialized = serialize_log(&actions, &options);
        let reparsed = parse_log(&serialized, &options).unwrap();
        assert_eq!(actions, reparsed);
    }

    #[test]
    fn canonical_round_trip_is_identity() {
        let options = ParseOptions::default();
        let actions = parse_log(TABLE1_CSV.as_bytes(), &options).unwrap();
        let serialized = serialize_log(&actions, &options);
        assert_eq!(String::from_utf8(serialized).unwrap(), TABLE1_CSV);
    }
}
