//! Command-line front end: the workspace file format, command dispatch,
//! JSON reports and the result cache.

pub mod args;
pub mod cache;
pub mod commands;
pub mod report;
pub mod workspace;

pub use commands::{run, RunOutput};
