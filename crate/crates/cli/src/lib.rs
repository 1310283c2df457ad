//! Command-line front end for the `boostdf` experiments.

pub mod args;
pub mod classify;
pub mod dof_curves;
pub mod error;
pub mod fit;
pub mod manifest;
pub mod output;
pub mod replay;
pub mod svg;

use args::{Cli, Command};
use error::CliError;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::DofCurves(a) => dof_curves::run(a),
        Command::ClassifySim(a) => classify::run(a),
        Command::Fit(a) => fit::run(a),
        Command::Replay(a) => replay::run(a),
    }
}
