use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::emotion::{EmotionType, GoalId, Tick};
use crate::reporting::timeline::EmotionTimeline;

/// Summary statistics of one emotion's intensity series.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct EmotionStats {
    pub peak: f64,
    /// Earliest tick at which `peak` is reached.
    pub peak_time: Option<Tick>,
    /// Ticks after the first onset at which the intensity rose.
    pub restimulations: usize,
    /// Sum of intensities over all ticks.
    pub area: f64,
}

impl EmotionStats {
    pub fn of(series: &[f64]) -> Self {
        let mut stats = EmotionStats::default();
        let mut onset = false;
        let mut prev = 0.0;
        for (t, &v) in series.iter().enumerate() {
            if v > stats.peak {
                stats.peak = v;
                stats.peak_time = Some(t as Tick);
            }
            if v > prev {
                if onset {
                    stats.restimulations += 1;
                }
                onset = true;
            }
            stats.area += v;
            prev = v;
        }
        stats
    }
}

/// `b - a` for every statistic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatsDelta {
    pub peak: f64,
    pub peak_time: i64,
    pub restimulations: i64,
    pub area: f64,
}

impl StatsDelta {
    fn between(a: &EmotionStats, b: &EmotionStats) -> Self {
        let t = |s: &EmotionStats| s.peak_time.map_or(0, |t| t as i64);
        StatsDelta {
            peak: b.peak - a.peak,
            peak_time: t(b) - t(a),
            restimulations: b.restimulations as i64 - a.restimulations as i64,
            area: b.area - a.area,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesComparison {
    pub etype: EmotionType,
    pub goal: GoalId,
    pub a: EmotionStats,
    pub b: EmotionStats,
    pub delta: StatsDelta,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ComparisonReport {
    pub rows: Vec<SeriesComparison>,
}

/// Compare every `(etype, goal)` that occurs in either run. A series that
/// never occurs in one run counts as zero there.
pub fn compare_runs(a: &EmotionTimeline, b: &EmotionTimeline) -> ComparisonReport {
    let keys: BTreeSet<_> = a.keys().union(&b.keys()).cloned().collect();
    let rows = keys
        .into_iter()
        .map(|(etype, goal)| {
            let sa = EmotionStats::of(&a.series(etype, &goal));
            let sb = EmotionStats::of(&b.series(etype, &goal));
            SeriesComparison {
                etype,
                goal,
                delta: StatsDelta::between(&sa, &sb),
                a: sa,
                b: sb,
            }
        })
        .collect();
    ComparisonReport { rows }
}

impl ComparisonReport {
    pub fn get(&self, etype: EmotionType, goal: &GoalId) -> Option<&SeriesComparison> {
        self.rows
            .iter()
            .find(|r| r.etype == etype && &r.goal == goal)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<15} {:<16} {:>9} {:>9} {:>10} {:>7} {:>7} {:>8} {:>5} {:>5} {:>6} {:>10} {:>10} {:>11}",
            "emotion", "goal", "peak_a", "peak_b", "d_peak", "t_a", "t_b", "d_t",
            "rs_a", "rs_b", "d_rs", "area_a", "area_b", "d_area"
        );
        let t = |x: Option<Tick>| x.map_or_else(|| "-".to_string(), |t| t.to_string());
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<15} {:<16} {:>9.6} {:>9.6} {:>+10.6} {:>7} {:>7} {:>+8} {:>5} {:>5} {:>+6} {:>10.4} {:>10.4} {:>+11.4}",
                r.etype.as_str(),
                r.goal.as_str(),
                r.a.peak,
                r.b.peak,
                r.delta.peak,
                t(r.a.peak_time),
                t(r.b.peak_time),
                r.delta.peak_time,
                r.a.restimulations,
                r.b.restimulations,
                r.delta.restimulations,
                r.a.area,
                r.b.area,
                r.delta.area,
            );
        }
        out
    }
}
