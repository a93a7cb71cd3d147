//! Library side of the `gupjcm` command-line tool: configuration, the
//! subcommands and the verification suite.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;
