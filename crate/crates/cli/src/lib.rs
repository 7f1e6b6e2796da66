//! Library half of the `fermat` command-line tool: problem files, reports,
//! command implementations, and the bundled corpus runner. The binary in
//! `main.rs` is a thin clap dispatcher over this.

pub mod commands;
pub mod corpus;
pub mod error;
pub mod problem;
pub mod report;

pub use commands::{cmd_classify, cmd_construct, cmd_verify, CommandOutput};
pub use error::CliError;
pub use problem::{parse_branch, ProblemFile};
pub use report::{residual_verdict, Report, Verdict};
