//! Experiment engine: parameter sweeps, CSV and trace output, verification
//! reports and the command line.

mod bounds_table;
pub mod cli;
mod conjecture;
mod csv;
mod seed;
mod sweep;
mod trace;
mod verify;

pub use bounds_table::bounds_table;
pub use cli::cli;
pub use conjecture::{conjecture_probe, ConjectureReport, ConjectureRow, ConjectureSpec};
pub use csv::{
    emit_csv, format_sig6, parse_csv, series_csv, series_file_name, CsvRow, HEADER as CSV_HEADER,
};
pub use seed::derive_trial_seed;
pub use sweep::{
    sweep, sweep_with_progress, trial_config, CellResult, IterationCap, KRange, SweepResult,
    SweepSpec,
};
pub use trace::{write_trace, write_trace_file, TRACE_HEADER};
pub use verify::{verify, CheckResult, Preset, VerifyPlan, VerifyReport};
