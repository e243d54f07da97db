//! Std companion to `pcrc-core`: a rayon-backed executor, the JSON run
//! configuration, CSV/JSON/SVG emission and the `pcrc` command line.

pub mod cli;
pub mod config;
pub mod exec;
pub mod output;
pub mod plot;

pub use cli::{run, CliError};
pub use config::RunConfig;
pub use exec::Rayon;
