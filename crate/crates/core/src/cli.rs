//! The `occpx` command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::characterization::{parse_config, validate_config, ConfigError, Severity};
use crate::labsim::{simulate, EventTrace, Level, Outcome, SimOptions, DEFAULT_STEP_CAP};
use crate::reporting::{
    build_heatmap, build_timeline, check_property, compare_runs, parse_properties, read_trace,
    write_trace, EmotionTimeline, Layer, TraceProperty, Verdict,
};
use crate::transition::Engine;
use crate::{Config, StateSnapshot};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_PROPERTY: u8 = 2;

pub const TIMELINE_FILE: &str = "timeline.csv";
pub const POSITIVE_IMAGE: &str = "heatmap_positive.ppm";
pub const NEGATIVE_IMAGE: &str = "heatmap_negative.ppm";
pub const CELLS_FILE: &str = "heatmap_cells.csv";
pub const TRACE_FILE: &str = "trace.jsonl";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const COMPARE_FILE: &str = "compare.txt";

#[derive(Parser, Debug)]
#[command(
    name = "occpx",
    version,
    about = "Event-driven emotion engine and lab simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate a level and write the report set.
    Run {
        #[arg(long)]
        level: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// File of temporal properties, one per line.
        #[arg(long)]
        props: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
        step_cap: u64,
    },
    /// Re-run the engine over a recorded trace.
    Replay {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        props: Option<PathBuf>,
    },
    /// Compare the timelines of two runs (output directories or CSV files).
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a configuration, optionally against a level.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        level: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn input(path: &Path, message: impl ToString) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

fn load_config(path: &Path) -> Result<Config, CliError> {
    parse_config(&read(path)?).map_err(|e| input(path, e))
}

fn load_level(path: &Path) -> Result<Level, CliError> {
    Level::parse(&read(path)?).map_err(|e| input(path, e))
}

fn load_props(path: Option<&Path>) -> Result<Vec<TraceProperty>, CliError> {
    match path {
        None => Ok(Vec::new()),
        Some(p) => parse_properties(&read(p)?).map_err(|e| input(p, e)),
    }
}

/// Parse arguments from the process and run; returns the exit status.
pub fn main() -> u8 {
    match Cli::try_parse() {
        Ok(cli) => execute(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn execute(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Run {
            level,
            config,
            out,
            props,
            step_cap,
        } => cmd_run(&level, &config, &out, props.as_deref(), step_cap),
        Command::Replay {
            trace,
            config,
            out,
            props,
        } => cmd_replay(&trace, &config, &out, props.as_deref()),
        Command::Compare { a, b, out } => cmd_compare(&a, &b, out.as_deref()),
        Command::Validate { config, level } => cmd_validate(&config, level.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn cmd_run(
    level_path: &Path,
    config_path: &Path,
    out: &Path,
    props: Option<&Path>,
    step_cap: u64,
) -> Result<u8, CliError> {
    let level = load_level(level_path)?;
    let config = load_config(config_path)?;
    let props = load_props(props)?;
    let trace = simulate(&level, &SimOptions { step_cap });
    write_reports(out, &level, &trace, config, &props, config_path)
}

pub fn cmd_replay(
    trace_path: &Path,
    config_path: &Path,
    out: &Path,
    props: Option<&Path>,
) -> Result<u8, CliError> {
    let file = read_trace(&read(trace_path)?).map_err(|e| input(trace_path, e))?;
    let level = Level::parse(&file.level_source).map_err(|e| input(trace_path, e))?;
    let config = load_config(config_path)?;
    let props = load_props(props)?;
    write_reports(out, &level, &file.trace, config, &props, config_path)
}

fn write_reports(
    out: &Path,
    level: &Level,
    trace: &EventTrace,
    config: Config,
    props: &[TraceProperty],
    config_path: &Path,
) -> Result<u8, CliError> {
    let engine = Engine::new(config).map_err(|e| input(config_path, e))?;
    let events: Vec<_> = trace.events().cloned().collect();
    let snapshots = engine.run(&events).map_err(|e| input(config_path, e))?;
    fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;

    let timeline = build_timeline(&snapshots);
    let heat = build_heatmap(level, trace, &snapshots);
    write(&out.join(TIMELINE_FILE), timeline.to_csv())?;
    write(&out.join(POSITIVE_IMAGE), heat.render_ppm(Layer::Positive))?;
    write(&out.join(NEGATIVE_IMAGE), heat.render_ppm(Layer::Negative))?;
    write(&out.join(CELLS_FILE), heat.to_csv())?;
    write(
        &out.join(TRACE_FILE),
        write_trace(level.source(), trace, &snapshots),
    )?;

    let verdicts: Vec<(String, Verdict)> = props
        .iter()
        .map(|p| (p.to_string(), check_property(&timeline, p)))
        .collect();
    let summary = summary(trace, &snapshots, &timeline, &verdicts);
    write(&out.join(SUMMARY_FILE), &summary)?;
    print!("{summary}");

    Ok(if verdicts.iter().all(|(_, v)| v.holds()) {
        EXIT_OK
    } else {
        EXIT_PROPERTY
    })
}

fn summary(
    trace: &EventTrace,
    snapshots: &[StateSnapshot],
    timeline: &EmotionTimeline,
    verdicts: &[(String, Verdict)],
) -> String {
    let mut s = String::new();
    let outcome = match trace.outcome() {
        Some(Outcome::Completed) => "completed",
        Some(Outcome::Died) => "died",
        Some(Outcome::StepCap) => "step cap reached",
        None => "unfinished",
    };
    let _ = writeln!(s, "outcome: {outcome}");
    let _ = writeln!(s, "ticks: {}", timeline.end().unwrap_or(0));
    let _ = writeln!(s, "events: {}", trace.entries.len());
    if let Some(last) = snapshots.last() {
        for (id, belief) in last.beliefs.iter() {
            match belief.likelihood {
                Some(v) => {
                    let _ = writeln!(s, "goal {id}: {} ({v:.6})", belief.status.as_str());
                }
                None => {
                    let _ = writeln!(s, "goal {id}: {}", belief.status.as_str());
                }
            }
        }
    }
    let _ = writeln!(s, "peaks:");
    for (etype, goal) in timeline.keys() {
        let series = timeline.series(etype, &goal);
        let (t, v) =
            series.iter().enumerate().fold(
                (0, 0.0),
                |best, (t, &v)| if v > best.1 { (t, v) } else { best },
            );
        let _ = writeln!(s, "  {etype} {goal}: {v:.6} at t={t}");
    }
    if !verdicts.is_empty() {
        let _ = writeln!(s, "properties:");
        for (text, verdict) in verdicts {
            match verdict {
                Verdict::Holds => {
                    let _ = writeln!(s, "  PASS {text}");
                }
                Verdict::Fails { witness: Some(t) } => {
                    let _ = writeln!(s, "  FAIL {text} (t={t})");
                }
                Verdict::Fails { witness: None } => {
                    let _ = writeln!(s, "  FAIL {text}");
                }
            }
        }
    }
    s
}

fn load_timeline(path: &Path) -> Result<EmotionTimeline, CliError> {
    let file = if path.is_dir() {
        path.join(TIMELINE_FILE)
    } else {
        path.to_path_buf()
    };
    EmotionTimeline::from_csv(&read(&file)?).map_err(|e| input(&file, e))
}

pub fn cmd_compare(a: &Path, b: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let ta = load_timeline(a)?;
    let tb = load_timeline(b)?;
    if ta.goals() != tb.goals() {
        let names = |t: &EmotionTimeline| {
            t.goals()
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        return Err(input(
            b,
            format!("goal sets differ: [{}] vs [{}]", names(&ta), names(&tb)),
        ));
    }
    let report = compare_runs(&ta, &tb).render();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        write(&dir.join(COMPARE_FILE), &report)?;
    }
    print!("{report}");
    Ok(EXIT_OK)
}

pub fn cmd_validate(config_path: &Path, level_path: Option<&Path>) -> Result<u8, CliError> {
    let text = read(config_path)?;
    let mut lines = Vec::new();
    let config = match parse_config::<f64>(&text) {
        Ok(c) => Some(c),
        Err(ConfigError::Invalid(problems)) => {
            lines.extend(problems.iter().map(|p| p.to_string()));
            None
        }
        Err(e) => return Err(input(config_path, e)),
    };
    if let Some(config) = &config {
        lines.extend(
            validate_config(config)
                .iter()
                .filter(|p| p.severity == Severity::Warning)
                .map(|p| p.to_string()),
        );
    }
    if let Some(path) = level_path {
        let level = load_level(path)?;
        if let Some(config) = &config {
            lines.extend(entity_warnings(config, &level));
        }
    }
    for line in &lines {
        println!("{line}");
    }
    if lines.is_empty() {
        println!("ok");
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_INPUT)
    }
}

/// Rules or desirability entries naming doors or buttons the level lacks.
fn entity_warnings(config: &Config, level: &Level) -> Vec<String> {
    let known = |id: &str| level.doors.contains_key(id) || level.buttons.contains_key(id);
    let mut out = Vec::new();
    for rule in &config.rules {
        if let Some(id) = rule.entity.as_deref().filter(|id| !known(id)) {
            out.push(format!(
                "warning: rule on '{}' names entity '{id}' which the level does not define",
                rule.event
            ));
        }
    }
    for entry in &config.appraisal.des.entries {
        if let Some(id) = entry.entity.as_deref().filter(|id| !known(id)) {
            out.push(format!(
                "warning: desirability of '{}' names entity '{id}' which the level does not define",
                entry.event
            ));
        }
    }
    out
}
