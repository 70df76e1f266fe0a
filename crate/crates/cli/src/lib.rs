//! Command line front end for the `twomode` simulator: state file IO,
//! CSV/JSON artifact export, and the four subcommands
//! (`negativity`, `evolve`, `squeeze`, `scan`).

pub mod cli;
pub mod export;
pub mod run;
pub mod state_io;

pub use cli::{Cli, Command};
pub use run::{run, CliError};
