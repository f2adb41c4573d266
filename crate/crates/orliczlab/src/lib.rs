//! Command-line laboratory around `orliczlab-core`.
//!
//! Loads gauge and field tables, merges key=value configuration files with
//! command-line flags, dispatches to the numerical core and writes JSON
//! reports, CSV plot tables and a sidecar with wall-clock data.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod suite;

pub use error::CliError;
