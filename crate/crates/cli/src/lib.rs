//! Verification suites and word-level queries for the Garnier system, with
//! JSON reports. The binary in `main.rs` is a thin clap wrapper around this.

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;

pub use config::{ConfigError, Output, RunConfig};
pub use report::{Check, Report};
pub use suites::{verify, Session, Suite};
