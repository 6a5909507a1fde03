//! Views over a finished run: timelines, heat maps, temporal properties,
//! run comparison and on-disk trace records.

pub mod compare;
pub mod heatmap;
pub mod property;
pub mod records;
pub mod timeline;

pub use compare::{compare_runs, ComparisonReport, EmotionStats, SeriesComparison, StatsDelta};
pub use heatmap::{build_heatmap, CellClass, HeatMap, Layer};
pub use property::{
    check_property, parse_properties, Comparator, Condition, PropertyError, TraceProperty, Verdict,
};
pub use records::{read_trace, write_trace, RecordError, StateRecord, TraceFile, TraceRecord};
pub use timeline::{build_timeline, EmotionTimeline, TimelineError, TimelineRow};
