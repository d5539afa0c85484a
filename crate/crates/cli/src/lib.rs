//! Command-line front end for `weylswap-core`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 unreadable or
//! malformed input, 3 a precondition or dense budget was violated.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod record;

pub use args::Cli;
pub use commands::{run, Report};
pub use error::{exit, CliError};
