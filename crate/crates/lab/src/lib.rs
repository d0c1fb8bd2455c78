//! Benchmark sweeps, experiment files, brute-force verification and table
//! presets built on `qae-core`.

pub mod bench;
pub mod config;
pub mod reproduce;
pub mod verify;
