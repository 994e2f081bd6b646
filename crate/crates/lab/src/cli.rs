use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{self, Context};
use crate::config::RunConfig;
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "ghostlab", version, about = "Spectral-Galerkin experiments on ghost solutions of the forced 2D Navier-Stokes equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for the exports.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Seed for random data when the config does not fix one.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for ensemble runs.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Integrate the Galerkin system and export the trajectory.
    Simulate,
    /// Integrate the shell-compressed system and test for a chained ghost.
    GhostCheck,
    /// Export the chained-ghost curves in the (e, E) plane.
    Curves,
    /// Mechanised nonexistence argument for forcing on |k|^2 = 2.
    VerifyNonexistence,
    /// Randomised identity suite.
    Identities,
}

fn context(cli: &Cli) -> Result<Context> {
    let needs_config = !matches!(cli.command, Command::VerifyNonexistence | Command::Identities);
    let (config, base) = match &cli.config {
        Some(p) => (RunConfig::load(p)?, p.parent().map(PathBuf::from).unwrap_or_default()),
        None if needs_config => return Err(crate::error::LabError::config("--config is required for this command")),
        None => (RunConfig::default(), PathBuf::from(".")),
    };
    Ok(Context {
        config,
        base,
        out: cli.out.clone(),
        seed: cli.seed,
        jobs: cli.jobs,
    })
}

pub fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let ctx = context(cli)?;
    match cli.command {
        Command::Simulate => commands::simulate::run(&ctx, stdout).map(drop),
        Command::GhostCheck => commands::ghost::run(&ctx, stdout).map(drop),
        Command::Curves => commands::curves::run(&ctx, stdout).map(drop),
        Command::VerifyNonexistence => commands::verify::run(&ctx, stdout).map(drop),
        Command::Identities => commands::identities::run(&ctx, stdout).map(drop),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
