//! Command-line front end for `nomasec-core`: single-point evaluation,
//! parameter sweeps written as CSV, and the cross-validation runner.

pub mod error;
pub mod params;
pub mod presets;
pub mod sweep;
pub mod validate;

pub use error::{CliError, Result};
pub use params::Params;
pub use presets::Preset;
pub use sweep::{run_sweep, write_csv, Axis, Evaluator, SweepRow, SweepSpec, CSV_HEADER};
pub use validate::{run_validate, Check, Fault, Report, ValidateOptions, Validator};
