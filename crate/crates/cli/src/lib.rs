//! Command-line front end: named experiments, a test-function mini-language
//! and CSV/JSON emission.

pub mod config;
pub mod emit;
pub mod run;
pub mod spec;

pub use config::{Cli, ExperimentConfig};
pub use run::{run_command, Status, Summary};
pub use spec::{parse_field_spec, Field, FieldSpec, SpecError, Target};
