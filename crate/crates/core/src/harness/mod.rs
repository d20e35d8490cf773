//! Batch orchestration: realizations, sweeps, noise sweeps and report files.

mod manifest;
mod report;
mod run;
mod stats;
mod sweep;

pub use manifest::{DatasetSpec, RunManifest, DEFAULT_DISCARD};
pub use report::{
    climate_scatter_svg, emit_report, horizon_box_svg, write_noise_csv, write_reports_csv, write_sweep_csv,
    ReportFormats, REPORT_HEADER,
};
pub use run::{run_experiment, run_realization, Failure, RunOutcome};
pub use stats::{summarize, Stats, Summary};
pub use sweep::{noise_sweep, sweep, table_s1_configs, Hyper, NoisePoint, SearchMode, SweepSpec, Trial};
