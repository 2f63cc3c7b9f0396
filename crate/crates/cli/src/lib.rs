//! Library side of the `memweight` command-line tool: descriptor loading,
//! single-run reports and parameter sweeps.

pub mod commands;
pub mod sweep;

use std::path::Path;

use memweight_core::channel::ChannelDescriptor;
use memweight_core::games::{Game, GameDescriptor};
use memweight_core::QuantumChannel;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const SOLVER: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] memweight_core::Error),

    #[error("{failed} of {total} verification criteria failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => exit::INPUT,
            CliError::Core(memweight_core::Error::Solver { .. }) => exit::SOLVER,
            CliError::Core(_) => exit::INPUT,
            CliError::VerifyFailed { .. } => exit::VERIFY_FAILED,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn load_channel(path: &Path) -> CliResult<(ChannelDescriptor, QuantumChannel)> {
    let text = read(path)?;
    let desc = ChannelDescriptor::from_json(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let channel = desc.to_channel()?;
    Ok((desc, channel))
}

pub fn load_game(path: &Path) -> CliResult<Game> {
    let text = read(path)?;
    let desc = GameDescriptor::from_json(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(desc.to_game()?)
}

/// Writes to `out` when given, else to stdout.
pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
