//! Batch pipeline: enumerate the state family, run the projection and
//! witness construction per state, persist artifacts, and aggregate the
//! distance comparison tables.

mod pipeline;
mod record;
mod report;
mod settings;

pub use pipeline::{run_batch, run_layout, BatchSummary, StateOutcome};
pub use record::{ExperimentRecord, CSV_HEADER, SANDWICH_SLACK};
pub use report::{write_report, ReportSummary};
pub use settings::{default_corrections, derive_seed, Settings};
