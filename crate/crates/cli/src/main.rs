//! `quatem`: batch driver for mesh and field generation, identity checks,
//! field reconstruction and the extendibility test.
//!
//! Exit codes: 0 success, 2 bad configuration, 3 criterion failed,
//! 4 numerical precondition violated (e.g. a point too close to the mesh).

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Criterion(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Criterion(_) => 3,
            Failure::Numeric(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Criterion(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<quatem::Error> for Failure {
    fn from(e: quatem::Error) -> Self {
        use quatem::Error as E;
        match e {
            E::Singularity { .. } | E::NearBoundary { .. } | E::CoincidentNode { .. } => {
                Failure::Numeric(e.to_string())
            }
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("quatem: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
