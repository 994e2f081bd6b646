//! Command-line driver for `ghostlab-core`: TOML configs, text exports and the
//! `simulate`, `ghost-check`, `curves`, `verify-nonexistence` and `identities`
//! commands.
//!
//! Exit codes: 0 success, 2 configuration, 3 numeric failure, 4 failed verification.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod export;
pub mod fieldio;
pub mod fixture;
pub mod grid;
pub mod identities;

pub use error::{LabError, Result};
