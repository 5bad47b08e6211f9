//! Library surface of the command-line front end; the binary in `main.rs`
//! is a thin argument-parsing wrapper so the integration tests can call the
//! commands in-process.

pub mod commands;
pub mod files;
