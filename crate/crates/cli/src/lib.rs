//! Library surface of the `gradflow` command-line tool, exposed so the
//! integration and acceptance suites can drive the same code paths.

pub mod config;
pub mod convergence;
pub mod error;
pub mod initial;
pub mod output;
pub mod preset;
pub mod runner;

pub use config::RunConfig;
pub use error::CliError;
