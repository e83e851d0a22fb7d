//! Synthetic replication of the student-records transfer routine.
//!
//! The generator emits UI logs with the same action skeleton as a recorded
//! transfer session: per student, copy each spreadsheet cell, click the
//! matching web form field, paste, edit the pasted value into its final
//! shape, and press Submit. Knobs control trace count, structural
//! heterogeneity of addresses and phone numbers, ZIP duplication, and the
//! injection of redundant actions that exercise the filter rules. Generation
//! is deterministic for a seed.
//!
//! [`run_benchmark`] runs the three discovery strategies over a generated
//! log and assembles a comparison report.

mod harness;

pub use harness::{
    run_benchmark, BenchError, BenchmarkReport, RowOutcome, StrategyBudgets, StrategyRow,
    TransformationRow,
};

use crate::uilog::{ActionType, SourceApp, UiAction};
use chrono::NaiveDateTime;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

const FIRST_NAMES: &str = include_str!("data/first_names.txt");
const LAST_NAMES: &str = include_str!("data/last_names.txt");
const STREET_NAMES: &str = include_str!("data/street_names.txt");
const SUBURBS_ONE_WORD: &str = include_str!("data/suburbs_one_word.txt");
const SUBURBS_TWO_WORD: &str = include_str!("data/suburbs_two_word.txt");
const COUNTRIES: &str = include_str!("data/countries.txt");
const REGIONS: &str = include_str!("data/regions.txt");

fn pool(data: &str) -> Vec<&str> {
    data.lines().filter(|l| !l.is_empty()).collect()
}

/// The nine traceable target fields of the routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetField {
    FullName,
    Date,
    Phone,
    Email,
    Country,
    Street,
    City,
    Region,
    ZipCode,
}

impl TargetField {
    pub const ALL: [TargetField; 9] = [
        TargetField::FullName,
        TargetField::Date,
        TargetField::Phone,
        TargetField::Email,
        TargetField::Country,
        TargetField::Street,
        TargetField::City,
        TargetField::Region,
        TargetField::ZipCode,
    ];

    /// The web form field name, as it appears in the log.
    pub fn field_name(self) -> &'static str {
        match self {
            TargetField::FullName => "Full Name",
            TargetField::Date => "Date",
            TargetField::Phone => "Phone",
            TargetField::Email => "Email",
            TargetField::Country => "Country",
            TargetField::Street => "Adress_Street",
            TargetField::City => "Address_City",
            TargetField::Region => "Address_Region",
            TargetField::ZipCode => "Address_ZipCode",
        }
    }
}

/// One student row of the source spreadsheet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudentRecord {
    pub first_name: String,
    pub last_name: String,
    /// `DD/MM/YYYY`.
    pub birth_date: String,
    /// `+61 0XX XXX XXXX`, or `+ 61 0XX XXX XXXX` in the spaced variant.
    pub phone: String,
    pub email: String,
    pub country: String,
    /// `99 Beacon Rd`.
    pub street: String,
    pub suburb: String,
    pub region: String,
    pub zip: String,
}

impl StudentRecord {
    /// The record behind the worked single-trace example.
    pub fn albert_rauf() -> StudentRecord {
        StudentRecord {
            first_name: "Albert".into(),
            last_name: "Rauf".into(),
            birth_date: "11/04/1986".into(),
            phone: "+ 61 043 512 4834".into(),
            email: "arauf@gmail.com".into(),
            country: "Germany".into(),
            street: "99 Beacon Rd".into(),
            suburb: "Port Melbourne".into(),
            region: "VIC".into(),
            zip: "3207".into(),
        }
    }

    /// The full address cell, as stored in column G.
    pub fn address(&self) -> String {
        format!(
            "{}, {}, {} {}, Australia",
            self.street, self.suburb, self.region, self.zip
        )
    }

    pub fn full_name(&self) -> String {
        format!("{} {}", self.first_name, self.last_name)
    }

    pub fn date_target(&self) -> String {
        self.birth_date.replace('/', "-")
    }

    /// The national digit groups joined with dashes: the last three
    /// space-separated groups of the phone value.
    pub fn phone_target(&self) -> String {
        let groups: Vec<&str> = self.phone.split(' ').collect();
        groups[groups.len().saturating_sub(3)..].join("-")
    }

    /// Ground-truth final value of a target field.
    pub fn expected_value(&self, target: TargetField) -> String {
        match target {
            TargetField::FullName => self.full_name(),
            TargetField::Date => self.date_target(),
            TargetField::Phone => self.phone_target(),
            TargetField::Email => self.email.clone(),
            TargetField::Country => self.country.clone(),
            TargetField::Street => self.street.clone(),
            TargetField::City => self.suburb.clone(),
            TargetField::Region => self.region.clone(),
            TargetField::ZipCode => self.zip.clone(),
        }
    }
}

/// Shape of the generated scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioSpec {
    pub trace_count: usize,
    pub seed: u64,
    /// Mix one- and two-word suburbs, giving at least two address patterns.
    pub address_heterogeneity: bool,
    /// Mix `+61` and `+ 61` phone prefixes, giving at least two phone
    /// patterns.
    pub phone_heterogeneity: bool,
    /// Draw ZIP codes from a pool of this size; with more traces than pool
    /// entries, duplicate ZIPs across different addresses are guaranteed.
    /// Zero gives every trace a unique ZIP.
    pub zip_pool: usize,
    /// Probability of injecting a redundant action at each opportunity.
    /// Any positive rate also forces one double-copy per trace, so filtering
    /// always has something to remove. Zero disables injection.
    pub redundancy_rate: f64,
    /// Restrict the routine to a subset of target fields; `None` is the full
    /// nine-field routine with the manual address-country and international
    /// checkbox steps.
    pub targets: Option<Vec<TargetField>>,
    /// Fixed records instead of generated ones (`trace_count` then follows
    /// the record count).
    pub fixed_records: Option<Vec<StudentRecord>>,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec {
            trace_count: 50,
            seed: 0,
            address_heterogeneity: true,
            phone_heterogeneity: true,
            zip_pool: 4,
            redundancy_rate: 0.3,
            targets: None,
            fixed_records: None,
        }
    }
}

impl ScenarioSpec {
    /// The single-trace scenario with the worked example's values and no
    /// injected redundancy.
    pub fn single_trace_example() -> ScenarioSpec {
        ScenarioSpec {
            trace_count: 1,
            redundancy_rate: 0.0,
            fixed_records: Some(vec![StudentRecord::albert_rauf()]),
            ..ScenarioSpec::default()
        }
    }

    pub fn records(&self) -> Vec<StudentRecord> {
        if let Some(fixed) = &self.fixed_records {
            return fixed.clone();
        }
        let first_names = pool(FIRST_NAMES);
        let last_names = pool(LAST_NAMES);
        let street_names = pool(STREET_NAMES);
        let one_word = pool(SUBURBS_ONE_WORD);
        let two_word = pool(SUBURBS_TWO_WORD);
        let countries = pool(COUNTRIES);
        let regions = pool(REGIONS);

        let mut rng = StdRng::seed_from_u64(self.seed);
        (0..self.trace_count)
            .map(|i| {
                let first_name = first_names[rng.random_range(0..first_names.len())];
                let last_name = last_names[rng.random_range(0..last_names.len())];
                let day = rng.random_range(10..=28);
                let month = rng.random_range(1..=12);
                let year = rng.random_range(1975..=2002);
                // The middle group carries the trace index, keeping phones
                // unique.
                let phone_groups = (
                    format!("0{}", rng.random_range(10..=99)),
                    format!("{:03}", 100 + i),
                    format!("{}", rng.random_range(1000..=9999)),
                );
                let spaced = self.phone_heterogeneity && i % 2 == 1;
                let phone = if spaced {
                    format!(
                        "+ 61 {} {} {}",
                        phone_groups.0, phone_groups.1, phone_groups.2
                    )
                } else {
                    format!(
                        "+61 {} {} {}",
                        phone_groups.0, phone_groups.1, phone_groups.2
                    )
                };
                let suburb = if self.address_heterogeneity && i % 2 == 1 {
                    two_word[rng.random_range(0..two_word.len())]
                } else {
                    one_word[rng.random_range(0..one_word.len())]
                };
                let zip = if self.zip_pool > 0 {
                    format!("{}", 3200 + rng.random_range(0..self.zip_pool))
                } else {
                    format!("{}", 3000 + i)
                };
                StudentRecord {
                    first_name: first_name.to_string(),
                    last_name: last_name.to_string(),
                    birth_date: format!("{day:02}/{month:02}/{year}"),
                    phone,
                    email: format!(
                        "{}{}@gmail.com",
                        first_name
                            .chars()
                            .next()
                            .expect("names are non-empty")
                            .to_lowercase(),
                        last_name.to_lowercase()
                    ),
                    country: countries[rng.random_range(0..countries.len())].to_string(),
                    // The street number carries the trace index, keeping
                    // street values (and hence addresses) unique.
                    street: format!(
                        "{} {}",
                        10 + 3 * i,
                        street_names[rng.random_range(0..street_names.len())]
                    ),
                    suburb: suburb.to_string(),
                    region: regions[rng.random_range(0..regions.len())].to_string(),
                    zip,
                }
            })
            .collect()
    }

    fn included(&self, target: TargetField) -> bool {
        self.targets
            .as_ref()
            .is_none_or(|targets| targets.contains(&target))
    }
}

struct LogBuilder {
    actions: Vec<UiAction>,
    timestamp: NaiveDateTime,
    rng: StdRng,
    /// Simulated web form state of the current trace: click and paste rows
    /// carry snapshots of it.
    fields: HashMap<String, String>,
    redundancy_rate: f64,
    injected_in_trace: usize,
}

impl LogBuilder {
    fn new(seed: u64, redundancy_rate: f64) -> LogBuilder {
        LogBuilder {
            actions: Vec::new(),
            timestamp: NaiveDateTime::parse_from_str("2019-03-03T19:02:18", "%Y-%m-%dT%H:%M:%S")
                .expect("literal timestamp"),
            rng: StdRng::seed_from_u64(seed.wrapping_add(0x5eed)),
            fields: HashMap::new(),
            redundancy_rate,
            injected_in_trace: 0,
        }
    }

    fn tick(&mut self) {
        self.timestamp += chrono::Duration::seconds(self.rng.random_range(1..=8));
    }

    fn push(
        &mut self,
        action_type: ActionType,
        source_app: SourceApp,
        content: Option<&str>,
        field_name: &str,
        field_value: &str,
    ) {
        self.actions.push(UiAction {
            timestamp: self.timestamp,
            action_type,
            source_app,
            content: content.map(str::to_string),
            field_name: field_name.to_string(),
            field_value: field_value.to_string(),
            extra_payload: Vec::new(),
        });
    }

    fn inject(&mut self) -> bool {
        self.redundancy_rate > 0.0 && self.rng.random_bool(self.redundancy_rate)
    }

    fn copy(&mut self, cell: &str, value: &str, force_double: bool) {
        if force_double || self.inject() {
            // Double Ctrl+C: the first copy is superseded before any paste.
            self.tick();
            self.push(
                ActionType::CopyCell,
                SourceApp::Worksheet,
                Some(value),
                cell,
                value,
            );
            self.injected_in_trace += 1;
        }
        self.tick();
        self.push(
            ActionType::CopyCell,
            SourceApp::Worksheet,
            Some(value),
            cell,
            value,
        );
    }

    fn click(&mut self, field: &str) {
        if self.inject() {
            // Stray worksheet selection that never leads to a copy.
            self.tick();
            self.push(ActionType::ClickField, SourceApp::Worksheet, None, "Z1", "");
            self.injected_in_trace += 1;
        }
        self.tick();
        let snapshot = self.fields.get(field).cloned().unwrap_or_default();
        self.push(ActionType::ClickField, SourceApp::Web, None, field, &snapshot);
    }

    fn paste(&mut self, field: &str, clipboard: &str) {
        self.tick();
        let snapshot = self.fields.get(field).cloned().unwrap_or_default();
        self.push(
            ActionType::Paste,
            SourceApp::Web,
            Some(clipboard),
            field,
            &snapshot,
        );
    }

    fn edit(&mut self, field: &str, value: &str) {
        let current = self.fields.get(field).cloned().unwrap_or_default();
        if self.inject() {
            // Double edit with replacement: an intermediate value that the
            // final edit supersedes.
            let mut intermediate = value.to_string();
            intermediate.pop();
            if !intermediate.is_empty() && intermediate != current && intermediate != value {
                self.tick();
                self.push(ActionType::EditField, SourceApp::Web, None, field, &intermediate);
                self.fields.insert(field.to_string(), intermediate);
                self.injected_in_trace += 1;
            }
        }
        self.tick();
        self.push(ActionType::EditField, SourceApp::Web, None, field, value);
        self.fields.insert(field.to_string(), value.to_string());
    }

    /// Copy a cell, then click-paste-edit it into a form field.
    fn transfer(&mut self, cell: &str, value: &str, field: &str, final_value: &str, force_double: bool) {
        self.copy(cell, value, force_double);
        self.click(field);
        self.paste(field, value);
        self.edit(field, final_value);
    }
}

/// Generates the UI log of `spec`: one task trace per record, each ending
/// with the Submit click. Deterministic for a seed.
pub fn generate_log(spec: &ScenarioSpec) -> Vec<UiAction> {
    let records = spec.records();
    let mut builder = LogBuilder::new(spec.seed, spec.redundancy_rate);

    for (i, record) in records.iter().enumerate() {
        builder.fields.clear();
        builder.injected_in_trace = 0;
        let row = 3 + i;
        let cell = |column: char| format!("{column}{row}");

        if spec.included(TargetField::FullName) {
            // Every trace with injection on gets at least one redundant
            // action, so filtering always has work to do.
            let force_double = spec.redundancy_rate > 0.0;
            builder.transfer(
                &cell('A'),
                &record.first_name,
                "Full Name",
                &record.first_name,
                force_double,
            );
            builder.copy(&cell('B'), &record.last_name, false);
            builder.click("Full Name");
            builder.paste("Full Name", &record.last_name);
            builder.edit("Full Name", &record.full_name());
        }
        if spec.included(TargetField::Country) {
            builder.transfer(&cell('F'), &record.country, "Country", &record.country, false);
        }
        if spec.included(TargetField::Date) {
            builder.transfer(
                &cell('C'),
                &record.birth_date,
                "Date",
                &record.date_target(),
                false,
            );
        }
        if spec.included(TargetField::Phone) {
            builder.transfer(
                &cell('D'),
                &record.phone,
                "Phone",
                &record.phone_target(),
                false,
            );
        }
        if spec.included(TargetField::Email) {
            builder.transfer(&cell('E'), &record.email, "Email", &record.email, false);
        }

        let address_fields = [
            (TargetField::Street, record.street.clone()),
            (TargetField::City, record.suburb.clone()),
            (TargetField::Region, record.region.clone()),
            (TargetField::ZipCode, record.zip.clone()),
        ];
        let wanted: Vec<&(TargetField, String)> = address_fields
            .iter()
            .filter(|(t, _)| spec.included(*t))
            .collect();
        if !wanted.is_empty() {
            // One copy of the address cell feeds every address field paste.
            let address = record.address();
            builder.copy(&cell('G'), &address, false);
            for (target, final_value) in wanted {
                builder.click(target.field_name());
                builder.paste(target.field_name(), &address);
                builder.edit(target.field_name(), final_value);
            }
        }

        if spec.targets.is_none() {
            // Manual steps of the full routine: the address country is typed
            // in, the checkbox is toggled for international students.
            builder.click("Address_Country");
            builder.edit("Address_Country", "Australia");
            builder.tick();
            builder.push(
                ActionType::ClickCheckBox,
                SourceApp::Web,
                None,
                "International",
                "FALSE",
            );
            if record.country != "Australia" {
                // Same timestamp as the click: recorders emit the toggle and
                // the resulting edit together.
                builder.push(
                    ActionType::EditField,
                    SourceApp::Web,
                    None,
                    "International",
                    "TRUE",
                );
                builder.fields.insert("International".into(), "TRUE".into());
            }
        }

        builder.tick();
        builder.push(ActionType::ClickButton, SourceApp::Web, None, "Submit", "");
    }
    builder.actions
}
