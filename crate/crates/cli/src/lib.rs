//! Library half of the `stskit` binary: file formats and command
//! implementations, kept separate from argument parsing so they can be
//! exercised directly by tests.

pub mod commands;
pub mod format;
