mod args;
mod config;
mod report;
mod sweep;
mod table;
mod verify;

use std::process::ExitCode;

use clap::Parser;
use corr_core::CorrError;

use crate::args::{Cli, Command};

/// Process exit: 0 ok, 1 verify failure, 2 usage, 3 convergence.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl Exit {
    pub fn usage(message: impl Into<String>) -> Exit {
        Exit { code: 2, message: message.into() }
    }

    pub fn convergence(message: impl Into<String>) -> Exit {
        Exit { code: 3, message: message.into() }
    }
}

impl From<CorrError> for Exit {
    fn from(e: CorrError) -> Exit {
        let code = match e {
            CorrError::InvalidCoupling { .. }
            | CorrError::CriticalPoint { .. }
            | CorrError::InvalidAlphas { .. }
            | CorrError::RegimeMismatch { .. }
            | CorrError::InvalidNodeCount(_)
            | CorrError::RadiusOutOfRange { .. }
            | CorrError::InvalidArgument(_) => 2,
            _ => 3,
        };
        Exit { code, message: e.to_string() }
    }
}

fn run() -> Result<(), Exit> {
    let argv = config::merge(std::env::args().collect())?;
    let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
    match &cli.command {
        Command::Table(a) => table::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Sweep(a) => sweep::run(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("corr: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
