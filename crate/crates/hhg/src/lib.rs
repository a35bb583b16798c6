//! File formats, caching and command drivers behind the `hhg` binary.

pub mod cache;
pub mod commands;
pub mod configfile;
pub mod golden;
pub mod manifest;
pub mod output;
pub mod plot;
