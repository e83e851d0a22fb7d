//! Command-line front end: preprocess UI logs, discover transformation
//! programs, and run the benchmark scenario.
//!
//! Exit codes: 0 on success (including discovery runs with partial
//! failures, which the report carries), 2 on malformed input data (CSV
//! parse errors, no traces, strict-replay inconsistencies), 3 on I/O
//! errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use copra::bench::{generate_log, run_benchmark, ScenarioSpec, StrategyBudgets};
use copra::pipeline::{discover_baseline, discover_by_target, discover_grouped, DiscoveryReport};
use copra::synth::SearchBudget;
use copra::uilog::{
    default_rules, filter_trace, parse_log, replay, serialize_log, ActionType, EndActionSpec,
    ParseOptions, ReplayMode, TaskTrace,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(
    name = "copra",
    version,
    about = "Discovers data-transformation programs from UI logs of copy-paste routines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalFlags,
}

#[derive(Args)]
struct GlobalFlags {
    /// Seed for representative selection and scenario generation.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Per-synthesis-call timeout in seconds.
    #[arg(long, global = true, default_value_t = 60)]
    timeout_secs: u64,

    /// Maximum program length searched.
    #[arg(long, global = true, default_value_t = 6)]
    max_ops: usize,

    /// Worker threads for parallel synthesis (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    output: OutputFormat,

    /// Validate snapshot consistency of every trace before processing.
    #[arg(long, global = true)]
    strict_replay: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
    Pseudocode,
}

#[derive(Subcommand)]
enum Command {
    /// Segment a UI log into task traces and remove redundant actions.
    Preprocess {
        /// UI log CSV.
        log: PathBuf,
        /// End action as TYPE:FIELD, e.g. "Click button:Submit".
        #[arg(long, default_value = "Click button:Submit")]
        end_action: String,
        /// Write the filtered log CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the segmentation report JSON here (stdout shows a summary).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Discover transformation programs from a UI log.
    Discover {
        /// UI log CSV.
        log: PathBuf,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        /// End action as TYPE:FIELD.
        #[arg(long, default_value = "Click button:Submit")]
        end_action: String,
    },
    /// Generate the student-records scenario and compare all strategies.
    Bench {
        /// Scenario spec JSON; defaults to the 50-trace student scenario.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Write the generated UI log CSV here.
        #[arg(long)]
        emit_log: Option<PathBuf>,
        /// Comparison table format (ignored with --output json).
        #[arg(long, value_enum, default_value_t = TableFormat::Markdown)]
        format: TableFormat,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Baseline,
    Opt1,
    Opt1opt2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Markdown,
    Csv,
}

enum CliError {
    /// Malformed input data.
    Data(String),
    /// Filesystem trouble.
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Data(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Data(msg) | CliError::Io(msg) => msg,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let budget = SearchBudget {
        max_ops: cli.global.max_ops,
        timeout: Duration::from_secs(cli.global.timeout_secs),
        ..SearchBudget::default()
    };
    match cli.command {
        Command::Preprocess {
            log,
            end_action,
            out,
            report,
        } => cmd_preprocess(&cli.global, &log, &end_action, out, report),
        Command::Discover {
            log,
            strategy,
            end_action,
        } => cmd_discover(&cli.global, &budget, &log, strategy, &end_action),
        Command::Bench {
            spec,
            emit_log,
            format,
        } => cmd_bench(&cli.global, &budget, spec, emit_log, format),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn parse_end_action(spec: &str) -> Result<EndActionSpec, CliError> {
    let Some((action_type, field)) = spec.split_once(':') else {
        return Err(CliError::Data(format!(
            "end action {spec:?} is not of the form TYPE:FIELD"
        )));
    };
    Ok(EndActionSpec::new(
        ActionType::from_label(action_type),
        field,
    ))
}

/// Parse, segment, and optionally strict-validate a log file.
fn load_traces(
    global: &GlobalFlags,
    path: &Path,
    end_action: &str,
) -> Result<(Vec<TaskTrace>, copra::uilog::Segmentation), CliError> {
    let bytes = read_file(path)?;
    let actions = parse_log(&bytes, &ParseOptions::default())
        .map_err(|e| CliError::Data(e.to_string()))?;
    let end_action = parse_end_action(end_action)?;
    let segmentation = copra::uilog::segment(&actions, &end_action)
        .map_err(|e| CliError::Data(e.to_string()))?;
    if global.strict_replay {
        for trace in &segmentation.traces {
            replay(trace, ReplayMode::Strict).map_err(|e| {
                CliError::Data(format!("trace {}: {e}", trace.trace_id))
            })?;
        }
    }
    let rules = default_rules();
    let filtered = segmentation
        .traces
        .iter()
        .map(|t| filter_trace(t, &rules))
        .collect();
    Ok((filtered, segmentation))
}

fn cmd_preprocess(
    global: &GlobalFlags,
    log: &Path,
    end_action: &str,
    out: Option<PathBuf>,
    report: Option<PathBuf>,
) -> Result<(), CliError> {
    let (filtered, segmentation) = load_traces(global, log, end_action)?;
    let actions_before: usize = segmentation.traces.iter().map(|t| t.len()).sum();
    let actions_after: usize = filtered.iter().map(|t| t.len()).sum();

    let filtered_actions: Vec<_> = filtered
        .iter()
        .flat_map(|t| t.actions.iter().cloned())
        .collect();
    if let Some(out) = out {
        write_file(&out, &serialize_log(&filtered_actions, &ParseOptions::default()))?;
    }

    let seg_report = segmentation.report();
    if let Some(report_path) = report {
        let json = serde_json::json!({
            "trace_count": seg_report.trace_count,
            "dropped_action_count": seg_report.dropped_action_count,
            "actions_before_filtering": actions_before,
            "actions_after_filtering": actions_after,
        });
        write_file(&report_path, serde_json::to_string_pretty(&json).unwrap().as_bytes())?;
    }

    match global.output {
        OutputFormat::Json => {
            let json = serde_json::json!({
                "trace_count": seg_report.trace_count,
                "dropped_action_count": seg_report.dropped_action_count,
                "actions_before_filtering": actions_before,
                "actions_after_filtering": actions_after,
            });
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
        _ => {
            println!(
                "{} trace(s); {} trailing action(s) dropped; {} -> {} actions after filtering",
                seg_report.trace_count,
                seg_report.dropped_action_count,
                actions_before,
                actions_after
            );
        }
    }
    Ok(())
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
            .install(f),
        _ => f(),
    }
}

fn cmd_discover(
    global: &GlobalFlags,
    budget: &SearchBudget,
    log: &Path,
    strategy: StrategyArg,
    end_action: &str,
) -> Result<(), CliError> {
    let (traces, _) = load_traces(global, log, end_action)?;
    let seed = global.seed.unwrap_or(0);
    let report: DiscoveryReport = with_pool(global.workers, || match strategy {
        StrategyArg::Baseline => discover_baseline(&traces, budget),
        StrategyArg::Opt1 => discover_by_target(&traces, budget),
        StrategyArg::Opt1opt2 => discover_grouped(&traces, budget, seed),
    })
    .map_err(|e| CliError::Data(e.to_string()))?;

    match global.output {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap())
        }
        OutputFormat::Table => print!("{}", report.render_table()),
        OutputFormat::Pseudocode => print!("{}", report.render_pseudocode()),
    }
    Ok(())
}

fn cmd_bench(
    global: &GlobalFlags,
    budget: &SearchBudget,
    spec: Option<PathBuf>,
    emit_log: Option<PathBuf>,
    format: TableFormat,
) -> Result<(), CliError> {
    let mut scenario = match spec {
        Some(path) => {
            let bytes = read_file(&path)?;
            serde_json::from_slice::<ScenarioSpec>(&bytes)
                .map_err(|e| CliError::Data(format!("bad scenario spec: {e}")))?
        }
        None => ScenarioSpec::default(),
    };
    if let Some(seed) = global.seed {
        scenario.seed = seed;
    }

    if let Some(path) = emit_log {
        let log = generate_log(&scenario);
        write_file(&path, &serialize_log(&log, &ParseOptions::default()))?;
    }

    let budgets = StrategyBudgets {
        baseline: budget.clone(),
        by_target: budget.clone(),
        grouped: budget.clone(),
    };
    let report = with_pool(global.workers, || run_benchmark(&scenario, &budgets))
        .map_err(|e| CliError::Data(e.to_string()))?;

    match global.output {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        _ => match format {
            TableFormat::Markdown => print!("{}", report.render_markdown()),
            TableFormat::Csv => print!("{}", report.render_csv()),
        },
    }
    Ok(())
}
