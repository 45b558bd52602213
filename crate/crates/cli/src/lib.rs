//! Front end for `bcb-core`: the `bcb` command, its JSON result cache and the
//! bundled reference tables.

pub mod app;
pub mod cache;
mod error;
pub mod golden;
pub mod verify;

pub use app::{run, Cli, Command, Context};
pub use cache::ResultCache;
pub use error::{CliError, CliResult};
