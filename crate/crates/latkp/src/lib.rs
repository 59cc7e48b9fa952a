//! Command-line front end and run orchestration for the lattice KP
//! verification toolkit.
//!
//! The library side exposes three layers:
//!
//! - [`config`]: the JSON run-configuration schema and its conversions into
//!   lattice parameters, spectral data, and deformation constants;
//! - [`report`]: the deterministic JSON report document the tool emits;
//! - [`runs`]: execution of verify runs (parallel check evaluation with pole
//!   screening), field exports, and the closed-form-vs-oracle comparison.
//!
//! The `latkp` binary is a thin clap wrapper over these functions.

pub mod config;
pub mod report;
pub mod runs;

pub use config::{ConfigError, RunConfig};
pub use report::{CheckSummary, PointEntry, ReportDocument, SCHEMA_VERSION};
pub use runs::{
    all_check_names, export_fields, parse_field, resolve_checks, run_oracle, run_verify,
    ExportFormat, FieldSpec, RunCheck,
};
