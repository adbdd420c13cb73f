//! Sweep runner: configuration, execution, aggregation and reporting.

mod aggregate;
mod config;
mod output;
mod run;
pub mod svg;

pub use aggregate::{aggregate, median, MedianRow};
pub use config::{ExperimentConfig, TaskKind, DEFAULT_SIZES};
pub use output::{emit_outputs, RECORDS_HEADER};
pub use run::{
    data_seed, run, run_free_running_task, run_normal_task, run_with_registry, trial_seed, ExperimentResult,
    FreeRunArtifacts, TrialRecord, WassersteinRow, PREDICTED_VS_TARGET, SURROGATE_VS_TARGET,
};
