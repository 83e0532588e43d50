//! Command-line front end: job files in, reports out.

pub mod catalog;
pub mod job;
pub mod report;
pub mod run;

pub use catalog::{replay, replay_text, CATALOG};
pub use job::{parse_input, parse_job, print_job, JobSpec, ParseError};
pub use report::Report;
pub use run::{run, CliError, RunOptions};

/// Exit status when a report's checks fail or the catalog digests differ.
pub const EXIT_CHECK_FAILED: i32 = 3;
