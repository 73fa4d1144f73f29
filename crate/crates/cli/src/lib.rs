//! Library half of the `discord` command: each subcommand is a plain function so the
//! acceptance tests can drive it without spawning processes.

pub mod audit;
pub mod compute;
pub mod error;
pub mod format;
pub mod sweep;
pub mod verify;
