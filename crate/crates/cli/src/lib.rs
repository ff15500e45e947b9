//! Library surface of the experiment CLI: configuration schema, output
//! plumbing, subcommand implementations, and the canned acceptance suite.
//! The `svito` binary is a thin dispatcher over these.

pub mod accept;
pub mod commands;
pub mod config;
pub mod output;
