//! Library surface of the `qdot2e` command-line tool: configuration
//! resolution, run records with CSV/JSON round-tripping, the result cache,
//! and the pipeline drivers. The binary in `main.rs` is a thin dispatcher
//! over these modules, and integration tests exercise them directly.

pub mod cache;
pub mod config;
pub mod record;
pub mod runner;
