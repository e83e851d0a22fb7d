//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured evidence (run with `--nocapture` to see them).
//!
//! The default 50-trace scenario is generated and benchmarked once and
//! shared across criteria; everything derived from it is deterministic for
//! the seed baked in below.

use copra::bench::{
    run_benchmark, BenchmarkReport, ScenarioSpec, StrategyBudgets, StudentRecord, TargetField,
};
use copra::extract::extract_examples_per_target;
use copra::pipeline::{discover_grouped, FailureReason, TargetResult};
use copra::synth::{
    enumerate_successors, synthesize, NotFoundReason, Program, SearchBudget, SearchMode,
    SuccessorContext, Table, TransformOp, SynthesisOutcome,
};
use copra::tokenize::tokenize;
use copra::uilog::{
    default_rules, filter_trace, replay_final_values, segment, EndActionSpec, TaskTrace,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn pass(criterion: u32, detail: &str) {
    println!("acceptance criterion {criterion}: PASS — {detail}");
}

fn table(rows: &[&[&str]]) -> Table {
    Table::new(
        rows.iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect(),
    )
    .unwrap()
}

/// The default scenario: 50 traces, heterogeneous addresses and phones,
/// colliding ZIPs, redundancy injection on.
fn default_scenario() -> ScenarioSpec {
    ScenarioSpec::default()
}

fn scenario_traces(spec: &ScenarioSpec) -> Vec<TaskTrace> {
    let log = copra::bench::generate_log(spec);
    let rules = default_rules();
    segment(&log, &EndActionSpec::default())
        .unwrap()
        .traces
        .iter()
        .map(|t| filter_trace(t, &rules))
        .collect()
}

struct SharedBenchmark {
    report: BenchmarkReport,
    wall: Duration,
}

fn shared_benchmark() -> &'static SharedBenchmark {
    static SHARED: OnceLock<SharedBenchmark> = OnceLock::new();
    SHARED.get_or_init(|| {
        let budgets = StrategyBudgets::default(); // 60 s per synthesis call
        let start = Instant::now();
        let report = run_benchmark(&default_scenario(), &budgets).unwrap();
        SharedBenchmark {
            report,
            wall: start.elapsed(),
        }
    })
}

fn discovered_fields(results: &[TargetResult]) -> HashSet<String> {
    results
        .iter()
        .filter(|t| t.discovered())
        .map(|t| t.target.field.clone())
        .collect()
}

#[test]
fn criterion_1_benchmark_coverage_ordering() {
    let shared = shared_benchmark();
    let report = &shared.report;

    assert!(
        shared.wall < Duration::from_secs(600),
        "benchmark took {:?}, expected under 10 minutes",
        shared.wall
    );

    let baseline = report.baseline.totals;
    let opt1 = report.by_target.totals;
    let opt2 = report.grouped.totals;

    assert_eq!(opt2.total, 9, "nine traceable targets");
    assert_eq!(opt2.discovered, 9, "Opt 1 + Opt 2 must discover 9/9");
    assert_eq!(baseline.discovered, 0, "Baseline must discover nothing");

    // Monotone coverage: Baseline <= Opt1 <= Opt1+Opt2.
    assert!(baseline.discovered <= opt1.discovered);
    assert!(opt1.discovered <= opt2.discovered);

    // Opt 1 discovers a strict subset of Opt 2's targets...
    let opt1_set = discovered_fields(report.by_target.target_results());
    let opt2_set = discovered_fields(report.grouped.target_results());
    assert!(opt1_set.is_subset(&opt2_set));
    assert!(opt1_set.len() < opt2_set.len(), "subset must be strict");

    // ...that excludes at least the ambiguous-ZIP and heterogeneous-city
    // targets.
    assert!(!opt1_set.contains("Address_ZipCode"));
    assert!(!opt1_set.contains("Address_City"));
    let zip_result = report
        .by_target
        .target_results()
        .iter()
        .find(|t| t.target.field == "Address_ZipCode")
        .unwrap();
    assert_eq!(
        zip_result.failures[0].reason,
        FailureReason::AmbiguousOutput
    );

    pass(
        1,
        &format!(
            "baseline {}/{}, opt1 {}/{}, opt1+opt2 {}/{} in {:.1?}",
            baseline.discovered,
            baseline.total,
            opt1.discovered,
            opt1.total,
            opt2.discovered,
            opt2.total,
            shared.wall
        ),
    );
}

#[test]
fn criterion_2_named_programs_replay_exactly() {
    let shared = shared_benchmark();
    let grouped = &shared.report.grouped;

    // Recompute the examples and their groups from the same deterministic
    // scenario.
    let traces = scenario_traces(&default_scenario());
    let by_target = extract_examples_per_target(&traces).unwrap();

    let expected_fields = [
        "Full Name",
        "Date",
        "Phone",
        "Email",
        "Country",
        "Adress_Street",
        "Address_City",
        "Address_Region",
        "Address_ZipCode",
    ];
    for field in expected_fields {
        let result = grouped
            .target_results()
            .iter()
            .find(|t| t.target.field == field)
            .unwrap_or_else(|| panic!("missing target {field}"));
        assert!(result.discovered(), "{field} must be discovered");

        let examples = &by_target[&result.target];
        for entry in &result.entries {
            for key in &entry.pattern_keys {
                let members: Vec<_> = examples
                    .iter()
                    .filter(|e| copra::tokenize::tokenize_inputs(e) == *key)
                    .collect();
                assert!(!members.is_empty(), "pattern {key:?} of {field} has members");
                for member in members {
                    let input = Table::from_row(member.input_values()).unwrap();
                    let output = Table::from_row(member.output_values()).unwrap();
                    assert_eq!(
                        entry.program.run(&input).unwrap(),
                        output,
                        "{field} program must replay byte-exactly"
                    );
                }
            }
        }
    }

    let full_name = grouped
        .target_results()
        .iter()
        .find(|t| t.target.field == "Full Name")
        .unwrap();
    let programs: Vec<&Program> = full_name.entries.iter().map(|e| &e.program).collect();
    assert_eq!(programs.len(), 1);
    assert_eq!(
        programs[0].ops,
        vec![TransformOp::JoinChar {
            position: 0,
            glue: " ".to_string()
        }],
        "Full Name must be exactly one join by space"
    );

    for field in ["Email", "Country"] {
        let result = grouped
            .target_results()
            .iter()
            .find(|t| t.target.field == field)
            .unwrap();
        for entry in &result.entries {
            assert!(entry.program.is_empty(), "{field} must be the identity");
        }
    }

    pass(2, "all nine programs replay byte-exactly on their groups");
}

/// The second student of the worked examples: date, phone, email, and the
/// four-way address decomposition.
fn wendy_macdonald() -> StudentRecord {
    StudentRecord {
        first_name: "Wendy".into(),
        last_name: "Macdonald".into(),
        birth_date: "18/08/1992".into(),
        phone: "+61 029 211 4904".into(),
        email: "wmacdonald@gmail.com".into(),
        country: "New Zealand".into(),
        street: "122 Albert St".into(),
        suburb: "Port Melbourne".into(),
        region: "VIC".into(),
        zip: "3207".into(),
    }
}

#[test]
fn criterion_3_worked_transformations() {
    let spec = ScenarioSpec {
        trace_count: 1,
        redundancy_rate: 0.0,
        fixed_records: Some(vec![wendy_macdonald()]),
        ..ScenarioSpec::default()
    };
    let traces = scenario_traces(&spec);
    let report = discover_grouped(&traces, &SearchBudget::default(), 0).unwrap();

    let program_for = |field: &str| -> &Program {
        let result = report
            .target_results()
            .iter()
            .find(|t| t.target.field == field)
            .unwrap_or_else(|| panic!("no result for {field}"));
        assert!(result.discovered(), "{field} must be discovered");
        &result.entries[0].program
    };
    let run_single = |program: &Program, input: &str| -> String {
        let result = program.run(&table(&[&[input]])).unwrap();
        result.rows()[0][0].clone()
    };

    assert_eq!(
        run_single(program_for("Date"), "18/08/1992"),
        "18-08-1992"
    );
    assert_eq!(
        run_single(program_for("Phone"), "+61 029 211 4904"),
        "029-211-4904"
    );
    assert_eq!(
        run_single(program_for("Email"), "wmacdonald@gmail.com"),
        "wmacdonald@gmail.com"
    );
    let address = "122 Albert St, Port Melbourne, VIC 3207, Australia";
    assert_eq!(run_single(program_for("Adress_Street"), address), "122 Albert St");
    assert_eq!(run_single(program_for("Address_City"), address), "Port Melbourne");
    assert_eq!(run_single(program_for("Address_Region"), address), "VIC");
    assert_eq!(run_single(program_for("Address_ZipCode"), address), "3207");

    pass(3, "date, phone, email identity, and all four address extractions reproduced");
}

#[test]
fn criterion_4_ambiguity_behavior() {
    let inputs = table(&[
        &["122 Albert St, Port Melbourne, VIC 3207, Australia"],
        &["99 Beacon Rd, Port Melbourne, VIC 3207, Australia"],
        &["396 Clarendon St, South Melbourne, VIC 3205, Australia"],
    ]);
    let outputs = table(&[&["3207"], &["3207"], &["3205"]]);

    let start = Instant::now();
    let outcome = synthesize(
        &[(inputs, outputs)],
        &SearchBudget::default(),
        SearchMode::Heuristic,
    )
    .unwrap();
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    assert_eq!(
        outcome,
        SynthesisOutcome::NotFound {
            reason: NotFoundReason::AmbiguousOutput
        }
    );

    // The same three examples, reaching discovery through pattern grouping:
    // every group must be solved.
    let mut records = vec![wendy_macdonald()];
    records.push(StudentRecord {
        street: "99 Beacon Rd".into(),
        ..wendy_macdonald()
    });
    records.push(StudentRecord {
        street: "396 Clarendon St".into(),
        suburb: "South Melbourne".into(),
        zip: "3205".into(),
        ..wendy_macdonald()
    });
    let spec = ScenarioSpec {
        trace_count: 3,
        redundancy_rate: 0.0,
        targets: Some(vec![TargetField::ZipCode]),
        fixed_records: Some(records),
        ..ScenarioSpec::default()
    };
    let traces = scenario_traces(&spec);
    let report = discover_grouped(&traces, &SearchBudget::default(), 0).unwrap();
    for result in report.target_results() {
        assert!(result.failures.is_empty(), "{:?}", result.failures);
        assert!(!result.entries.is_empty());
    }
    assert_eq!(report.totals.discovered, report.totals.total);

    pass(
        4,
        &format!("joint synthesis refused as ambiguous in {elapsed:.1?}; grouped discovery solved every pattern group"),
    );
}

#[test]
fn criterion_5_tokenization_fixture() {
    let pattern = tokenize("99 Beacon Rd, Port Melbourne, VIC 3207, Australia");
    assert_eq!(
        pattern.as_str(),
        "<d>+ <a>+ <a>+, <a>+ <a>+, <a>+ <d>+, <a>+"
    );
    pass(5, "worked tokenization example matches exactly");
}

#[test]
fn criterion_6_filter_semantics_preservation() {
    // 1,000 randomly generated traces with injected redundancy, across
    // varied knobs; zero violations allowed.
    let rules = default_rules();
    let mut checked = 0usize;
    for (seed, heterogeneity) in [(11, true), (12, false), (13, true), (14, false)] {
        let spec = ScenarioSpec {
            trace_count: 250,
            seed,
            address_heterogeneity: heterogeneity,
            phone_heterogeneity: !heterogeneity,
            redundancy_rate: 0.5,
            ..ScenarioSpec::default()
        };
        let log = copra::bench::generate_log(&spec);
        let segmentation = segment(&log, &EndActionSpec::default()).unwrap();
        for trace in &segmentation.traces {
            let filtered = filter_trace(trace, &rules);
            assert_eq!(
                replay_final_values(trace),
                replay_final_values(&filtered),
                "filtering changed replay values of trace {} (seed {seed})",
                trace.trace_id
            );
            let twice = filter_trace(&filtered, &rules);
            assert_eq!(filtered, twice, "filtering is not idempotent");
            checked += 1;
        }
    }
    assert_eq!(checked, 1000);
    pass(6, "1000 traces: replay invariant under filtering, filtering idempotent");
}

/// Independent oracle: breadth-first enumeration of all programs up to
/// `max_depth` over the same successor set, tracking visited states by
/// exact table equality.
fn bfs_minimum(start: &Table, goal: &Table, max_depth: usize) -> Option<usize> {
    if start == goal {
        return Some(0);
    }
    let ctx = SuccessorContext::for_goal(goal);
    let mut visited: HashSet<Vec<Vec<String>>> = HashSet::new();
    visited.insert(start.rows().to_vec());
    let mut queue: VecDeque<(Table, usize)> = VecDeque::new();
    queue.push_back((start.clone(), 0));
    while let Some((state, depth)) = queue.pop_front() {
        if depth == max_depth {
            continue;
        }
        for (_, next) in enumerate_successors(&state, &ctx) {
            if next == *goal {
                return Some(depth + 1);
            }
            if visited.insert(next.rows().to_vec()) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    None
}

/// Random single-row table: alphanumeric segments joined by separators.
fn random_toy_table(rng: &mut StdRng) -> Table {
    let columns = rng.random_range(1..=3);
    let row: Vec<String> = (0..columns)
        .map(|_| {
            let segments = rng.random_range(1..=3);
            let mut cell = String::new();
            for s in 0..segments {
                if s > 0 {
                    let sep = [" ", "-", "/", ",", "."][rng.random_range(0..5)];
                    cell.push_str(sep);
                }
                let alphabet = if rng.random_bool(0.5) {
                    ["ab", "cd", "ef", "x", "yz"]
                } else {
                    ["12", "345", "6", "78", "90"]
                };
                cell.push_str(alphabet[rng.random_range(0..alphabet.len())]);
            }
            cell
        })
        .collect();
    Table::from_row(row).unwrap()
}

/// Random ground-truth program: a walk of up to `max_depth` enumerated ops.
fn random_walk(rng: &mut StdRng, start: &Table, max_depth: usize) -> Table {
    let mut current = start.clone();
    let depth = rng.random_range(0..=max_depth);
    for _ in 0..depth {
        let ctx = SuccessorContext::for_goal(&current);
        let successors = enumerate_successors(&current, &ctx);
        if successors.is_empty() {
            break;
        }
        let (_, next) = &successors[rng.random_range(0..successors.len())];
        current = next.clone();
    }
    current
}

#[test]
fn criterion_7_search_optimality_oracle() {
    let start_time = Instant::now();
    let mut rng = StdRng::seed_from_u64(42);
    let budget = SearchBudget {
        max_ops: 3,
        ..SearchBudget::default()
    };
    let mut solved = 0usize;
    for instance in 0..200 {
        let input = random_toy_table(&mut rng);
        let output = random_walk(&mut rng, &input, 3);
        let examples = vec![(input.clone(), output.clone())];

        let oracle = bfs_minimum(&input, &output, 3);
        let exact = synthesize(&examples, &budget, SearchMode::Exact).unwrap();
        let heuristic = synthesize(&examples, &budget, SearchMode::Heuristic).unwrap();

        match (oracle, exact) {
            (Some(minimum), SynthesisOutcome::Found { cost, program, .. }) => {
                assert_eq!(
                    cost, minimum,
                    "instance {instance}: exact cost {cost} != BFS minimum {minimum} \
                     for {input} -> {output}"
                );
                assert_eq!(program.run(&input).unwrap(), output);
                solved += 1;
            }
            (None, SynthesisOutcome::NotFound { .. }) => {}
            (oracle, outcome) => panic!(
                "instance {instance}: oracle {oracle:?} disagrees with exact outcome {outcome:?} \
                 for {input} -> {output}"
            ),
        }

        match (oracle, heuristic) {
            (Some(_), SynthesisOutcome::Found { cost, program, .. }) => {
                assert!(cost >= oracle.unwrap());
                assert_eq!(
                    program.run(&input).unwrap(),
                    output,
                    "instance {instance}: heuristic program does not verify"
                );
            }
            (None, SynthesisOutcome::NotFound { .. }) => {}
            (oracle, outcome) => panic!(
                "instance {instance}: heuristic outcome {outcome:?} vs oracle {oracle:?} \
                 for {input} -> {output}"
            ),
        }
    }
    let elapsed = start_time.elapsed();
    assert!(
        elapsed < Duration::from_secs(120),
        "oracle suite took {elapsed:?}, expected under 2 minutes"
    );
    pass(
        7,
        &format!("200 instances ({solved} solvable): exact = BFS minimum, heuristic verified, in {elapsed:.1?}"),
    );
}

#[test]
fn criterion_8_provenance_extraction_fixture() {
    let csv = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/testdata/student_trace.csv"
    ));
    let actions = copra::uilog::parse_log(csv.as_bytes(), &Default::default()).unwrap();
    let traces = segment(&actions, &EndActionSpec::default()).unwrap().traces;
    let by_target = extract_examples_per_target(&traces).unwrap();

    let field = |name: &str| copra::extract::TargetRef {
        document: "Web".to_string(),
        field: name.to_string(),
    };

    // Exactly the nine pasted-into targets; the manually typed
    // Address_Country and the checkbox are excluded.
    let fields: Vec<&str> = by_target.keys().map(|t| t.field.as_str()).collect();
    assert_eq!(
        fields,
        vec![
            "Full Name",
            "Country",
            "Date",
            "Phone",
            "Email",
            "Adress_Street",
            "Address_City",
            "Address_Region",
            "Address_ZipCode",
        ]
    );
    assert!(!by_target.contains_key(&field("Address_Country")));
    assert!(!by_target.contains_key(&field("International")));

    let expect = |name: &str, inputs: &[&str], output: &str| {
        let examples = &by_target[&field(name)];
        assert_eq!(examples.len(), 1);
        assert_eq!(examples[0].input_values(), inputs);
        assert_eq!(examples[0].output_values(), vec![output]);
    };
    let address = "99 Beacon Rd, Port Melbourne, VIC 3207, Australia";
    expect("Full Name", &["Albert", "Rauf"], "Albert Rauf");
    expect("Country", &["Germany"], "Germany");
    expect("Date", &["11/04/1986"], "11-04-1986");
    expect("Phone", &["+ 61 043 512 4834"], "043-512-4834");
    expect("Email", &["arauf@gmail.com"], "arauf@gmail.com");
    expect("Adress_Street", &[address], "99 Beacon Rd");
    expect("Address_City", &[address], "Port Melbourne");
    expect("Address_Region", &[address], "VIC");
    expect("Address_ZipCode", &[address], "3207");

    // The source provenance of the name join: cells A3 and B3.
    let name_example = &by_target[&field("Full Name")][0];
    let locators: Vec<&str> = name_example
        .inputs
        .iter()
        .map(|(s, _)| s.locator.as_str())
        .collect();
    assert_eq!(locators, vec!["A3", "B3"]);

    pass(8, "per-target extraction matches the worked trace, manual fields excluded");
}
