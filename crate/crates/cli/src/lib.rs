//! Command-line driver for `torsion-core`: config ingestion, verification
//! suites, deterministic CSV tables and gnuplot scripts.

pub mod app;
pub mod cone;
pub mod config;
pub mod error;
pub mod output;
pub mod pseudo;
pub mod table;
pub mod verify;

pub use app::run;
pub use config::{parse_config, parse_config_str, RunConfig};
pub use error::CliError;
