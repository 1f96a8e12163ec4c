//! Library half of the `lumpgeom` command-line tool.

pub mod commands;
pub mod config;
pub mod suites;
