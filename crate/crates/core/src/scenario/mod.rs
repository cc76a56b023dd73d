//! Scenario documents, CSV traces and run summaries.

mod compare;
mod config;
mod summary;
mod trace;

pub use compare::{compare, Comparison, VehicleComparison};
pub use config::{Flags, Scenario, ScheduleEntry, VehicleSpec, SCHEMA_VERSION};
pub use summary::{
    deceleration_onset, sign_changes, summarize, CollisionSample, PairGap, RunSummary, VehicleSummary,
    ONSET_HOLD_S, ONSET_THRESHOLD,
};
pub use trace::{trace_to_string, write_trace, write_trace_file, TraceRecord, TRACE_HEADER};
