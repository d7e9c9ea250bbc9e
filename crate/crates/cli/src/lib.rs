//! Batch front end for the `polydress` solver: experiment documents,
//! figure presets, CSV/JSON emission and comparison reports.

pub mod error;
pub mod experiment;
pub mod output;
pub mod pipeline;

pub use error::CliError;
pub use experiment::{
    parse_document, preset, Engine, Experiment, ModesSpec, TauGrid, WeightsSpec, PRESETS,
};
pub use output::{read_series, write_series, ReportJson};
pub use pipeline::{property_check, run_batch, run_experiment, CheckSummary, RunSummary};
