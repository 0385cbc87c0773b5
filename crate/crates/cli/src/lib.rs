//! Library surface of the sweep CLI, exposed so integration tests can drive
//! configuration parsing and sweep execution directly.

pub mod config;
pub mod error;
pub mod output;
pub mod sweep;

pub use config::{AlphaSpec, IntegratorArg, PartialConfig, Preset, RunConfig};
pub use error::CliError;
pub use output::{emit_csv, fmt_sig12, sort_rows, ResultRow, CSV_HEADER};
pub use sweep::{expand_grid, measure_point, run_sweep, tau_grid, GridPoint};
