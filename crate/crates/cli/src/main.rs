//! `gevregret`: runs surplus-learner simulations, repeated games, property
//! suites and bound tables from the command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a checked assertion failed.

mod bounds;
mod config;
mod game;
mod presets;
mod simulate;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::AssertionFailed;

#[derive(Parser, Debug)]
#[command(name = "gevregret", version, about = "Regret experiments for GEV surplus learners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one learner against an environment and check its regret bound.
    Simulate(simulate::Args),
    /// Play a repeated game and report the coarse-correlated-equilibrium gap.
    Game(game::Args),
    /// Run the numerical property suites.
    Verify(verify::Args),
    /// Print optimal learning rates and regret bounds per model family.
    Bounds(bounds::Args),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate::run(a),
        Command::Game(a) => game::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Bounds(a) => bounds::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<AssertionFailed>() => {
            eprintln!("assertion failed: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
