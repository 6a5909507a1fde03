use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::emotion::{EmotionType, GoalId, Tick};
use crate::scalar::Scalar;
use crate::transition::StateSnapshot;

pub const TIMELINE_HEADER: &str = "time,etype,goal,intensity";

#[derive(Clone, Debug, PartialEq)]
pub struct TimelineRow {
    pub time: Tick,
    pub etype: EmotionType,
    pub goal: GoalId,
    pub intensity: f64,
}

/// Per-tick intensities of every active emotion.
///
/// Each tick is represented by the last state recorded at that time, so
/// events sharing a tick collapse into their combined outcome.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct EmotionTimeline {
    rows: Vec<TimelineRow>,
    /// Last tick covered, `None` for an empty run.
    end: Option<Tick>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("timeline line {line}: {message}")]
pub struct TimelineError {
    pub line: usize,
    pub message: String,
}

pub fn build_timeline<S: Scalar>(snapshots: &[StateSnapshot<S>]) -> EmotionTimeline {
    let mut last_per_tick: BTreeMap<Tick, &StateSnapshot<S>> = BTreeMap::new();
    for snap in snapshots {
        last_per_tick.insert(snap.time, snap);
    }
    let Some(&end) = last_per_tick.keys().next_back() else {
        return EmotionTimeline::default();
    };
    let mut rows = Vec::new();
    let mut current: Option<&StateSnapshot<S>> = None;
    for t in 0..=end {
        if let Some(snap) = last_per_tick.get(&t) {
            current = Some(snap);
        }
        let Some(snap) = current else { continue };
        rows.extend(snap.emotions.iter().map(|inst| TimelineRow {
            time: t,
            etype: inst.etype,
            goal: inst.goal.clone(),
            intensity: inst.intensity.as_f64(),
        }));
    }
    EmotionTimeline {
        rows,
        end: Some(end),
    }
}

impl EmotionTimeline {
    pub fn from_rows(rows: Vec<TimelineRow>) -> Self {
        let end = rows.iter().map(|r| r.time).max();
        EmotionTimeline { rows, end }
    }

    pub fn rows(&self) -> &[TimelineRow] {
        &self.rows
    }

    pub fn end(&self) -> Option<Tick> {
        self.end
    }

    /// Every tick covered by the run.
    pub fn ticks(&self) -> impl Iterator<Item = Tick> {
        let n = self.end.map_or(0, |e| e + 1);
        0..n
    }

    pub fn is_empty(&self) -> bool {
        self.end.is_none()
    }

    pub fn goals(&self) -> BTreeSet<GoalId> {
        self.rows.iter().map(|r| r.goal.clone()).collect()
    }

    /// Intensity per tick for one `(etype, goal)`; absent ticks are zero.
    pub fn series(&self, etype: EmotionType, goal: &GoalId) -> Vec<f64> {
        let mut values = vec![0.0; self.ticks().count()];
        for r in self
            .rows
            .iter()
            .filter(|r| r.etype == etype && &r.goal == goal)
        {
            values[r.time as usize] = r.intensity;
        }
        values
    }

    /// Every `(etype, goal)` that appears at least once.
    pub fn keys(&self) -> BTreeSet<(EmotionType, GoalId)> {
        self.rows
            .iter()
            .map(|r| (r.etype, r.goal.clone()))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.rows.len() + 1));
        out.push_str(TIMELINE_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{:.6}", r.time, r.etype, r.goal, r.intensity);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, TimelineError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == TIMELINE_HEADER => {}
            _ => {
                return Err(TimelineError {
                    line: 1,
                    message: format!("expected header '{TIMELINE_HEADER}'"),
                })
            }
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let bad = |message: String| TimelineError {
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split(',').collect();
            let [time, etype, goal, intensity] = fields.as_slice() else {
                return Err(bad(format!("expected 4 fields, found {}", fields.len())));
            };
            rows.push(TimelineRow {
                time: time
                    .parse()
                    .map_err(|_| bad(format!("bad time '{time}'")))?,
                etype: etype.parse().map_err(|e| bad(format!("{e}")))?,
                goal: GoalId::new(*goal),
                intensity: intensity
                    .parse()
                    .map_err(|_| bad(format!("bad intensity '{intensity}'")))?,
            });
        }
        Ok(EmotionTimeline::from_rows(rows))
    }
}
