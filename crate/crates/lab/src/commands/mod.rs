pub mod curves;
pub mod ghost;
pub mod identities;
pub mod simulate;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use crate::config::RunConfig;

/// Everything a command needs besides its own config keys.
#[derive(Clone, Debug)]
pub struct Context {
    pub config: RunConfig,
    /// Directory that relative paths in the config are resolved against.
    pub base: PathBuf,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub jobs: usize,
}

impl Context {
    pub fn new(config: RunConfig, out: impl Into<PathBuf>) -> Self {
        Self {
            config,
            base: PathBuf::from("."),
            out: out.into(),
            seed: None,
            jobs: 1,
        }
    }

    pub fn seed_or(&self, default: u64) -> u64 {
        self.seed.unwrap_or(default)
    }
}

pub(crate) fn say(log: &mut dyn Write, line: impl AsRef<str>) {
    let _ = writeln!(log, "{}", line.as_ref());
}
