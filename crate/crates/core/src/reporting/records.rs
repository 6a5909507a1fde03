//! JSON-lines trace records: a header with the level source, one line for
//! the initial state, then one line per event.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::emotion::{EmotionType, GoalStatus, Tick};
use crate::labsim::{EventTrace, Pos, TraceEntry};
use crate::scalar::Scalar;
use crate::transition::{Event, StateSnapshot};

pub const TRACE_FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeliefRecord {
    pub status: GoalStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub likelihood: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmotionRecord {
    pub etype: EmotionType,
    pub goal: String,
    pub intensity: f64,
    pub t0: Tick,
    pub peak: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub time: Tick,
    pub beliefs: BTreeMap<String, BeliefRecord>,
    pub emotions: Vec<EmotionRecord>,
}

impl<S: Scalar> From<&StateSnapshot<S>> for StateRecord {
    fn from(s: &StateSnapshot<S>) -> Self {
        StateRecord {
            time: s.time,
            beliefs: s
                .beliefs
                .iter()
                .map(|(id, b)| {
                    (
                        id.to_string(),
                        BeliefRecord {
                            status: b.status,
                            likelihood: b.likelihood.map(|v| v.as_f64()),
                        },
                    )
                })
                .collect(),
            emotions: s
                .emotions
                .iter()
                .map(|e| EmotionRecord {
                    etype: e.etype,
                    goal: e.goal.to_string(),
                    intensity: e.intensity.as_f64(),
                    t0: e.t0,
                    peak: e.peak.as_f64(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum TraceRecord {
    Header {
        format: u32,
        level: String,
    },
    Initial {
        pos: [usize; 2],
        state: StateRecord,
    },
    Step {
        index: usize,
        event: Event,
        pos: [usize; 2],
        state: StateRecord,
    },
}

/// A trace read back from disk.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceFile {
    pub level_source: String,
    pub trace: EventTrace,
    pub states: Vec<StateRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("trace line {line}: {message}")]
pub struct RecordError {
    pub line: usize,
    pub message: String,
}

fn pos_of(p: Pos) -> [usize; 2] {
    [p.row, p.col]
}

/// `snapshots[0]` is the initial state; `snapshots[i + 1]` follows entry `i`.
pub fn write_trace<S: Scalar>(
    level_source: &str,
    trace: &EventTrace,
    snapshots: &[StateSnapshot<S>],
) -> String {
    let mut out = String::new();
    let mut line = |r: &TraceRecord| {
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string(r).expect("records serialize")
        );
    };
    line(&TraceRecord::Header {
        format: TRACE_FORMAT,
        level: level_source.to_string(),
    });
    if let Some(s0) = snapshots.first() {
        line(&TraceRecord::Initial {
            pos: pos_of(trace.start),
            state: s0.into(),
        });
    }
    for (index, (entry, snap)) in trace
        .entries
        .iter()
        .zip(snapshots.iter().skip(1))
        .enumerate()
    {
        line(&TraceRecord::Step {
            index,
            event: entry.event.clone(),
            pos: pos_of(entry.pos),
            state: snap.into(),
        });
    }
    out
}

pub fn read_trace(text: &str) -> Result<TraceFile, RecordError> {
    let mut level_source = None;
    let mut start = None;
    let mut entries = Vec::new();
    let mut states = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let bad = |message: String| RecordError { line, message };
        let record: TraceRecord = serde_json::from_str(raw).map_err(|e| bad(e.to_string()))?;
        match record {
            TraceRecord::Header { format, level } => {
                if line != 1 || level_source.is_some() {
                    return Err(bad("header must be the first line".into()));
                }
                if format != TRACE_FORMAT {
                    return Err(bad(format!("unsupported trace format {format}")));
                }
                level_source = Some(level);
            }
            _ if level_source.is_none() => return Err(bad("missing header".into())),
            TraceRecord::Initial { pos, state } => {
                if start.is_some() {
                    return Err(bad("duplicate initial record".into()));
                }
                start = Some(Pos::new(pos[0], pos[1]));
                states.push(state);
            }
            TraceRecord::Step {
                index,
                event,
                pos,
                state,
            } => {
                if start.is_none() {
                    return Err(bad("step before initial record".into()));
                }
                if index != entries.len() {
                    return Err(bad(format!(
                        "expected step {}, found {index}",
                        entries.len()
                    )));
                }
                entries.push(TraceEntry {
                    event,
                    pos: Pos::new(pos[0], pos[1]),
                });
                states.push(state);
            }
        }
    }
    let level_source = level_source.ok_or(RecordError {
        line: 1,
        message: "empty trace file".into(),
    })?;
    let start = start.ok_or(RecordError {
        line: 2,
        message: "missing initial record".into(),
    })?;
    Ok(TraceFile {
        level_source,
        trace: EventTrace { start, entries },
        states,
    })
}
