//! `vactorque`: parameter sweeps and single-point evaluations as CSV or JSON.
//!
//! Exit status 0 on success, 2 for configuration errors and 3 for
//! numerical failures.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Overrides, Settings};

#[derive(Debug, Parser)]
#[command(
    name = "vactorque",
    version,
    about = "Nonequilibrium vacuum torque on chiral bodies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Ĵ over an (ã, b̃) grid with both asymptotes.
    GeometryFactor,
    /// Torque over a grid of body temperatures.
    Torque,
    /// Cooling time (with --u1) or terminal angular velocity over u0.
    Dynamics,
    /// J_AB of a voxel file over an ω grid, plus the integrated torque.
    Voxel,
    /// Susceptibilities and X_AB over an ω grid.
    MaterialsTable,
}

const CONFIG_ERROR: u8 = 2;
const NUMERICAL_ERROR: u8 = 3;

fn run(cli: &Cli) -> Result<(), (u8, String)> {
    let settings = Settings::resolve(&cli.overrides).map_err(|e| (CONFIG_ERROR, e.to_string()))?;
    if settings.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(settings.threads)
            .build_global()
            .map_err(|e| (CONFIG_ERROR, e.to_string()))?;
    }
    let table = match cli.command {
        Command::GeometryFactor => commands::geometry_factor(&settings),
        Command::Torque => commands::torque(&settings),
        Command::Dynamics => commands::dynamics(&settings),
        Command::Voxel => commands::voxel(&settings),
        Command::MaterialsTable => commands::materials_table(&settings),
    }
    .map_err(|e| {
        let code = if e.is_numerical() {
            NUMERICAL_ERROR
        } else {
            CONFIG_ERROR
        };
        (code, e.to_string())
    })?;
    table
        .write(&settings)
        .map_err(|e| (CONFIG_ERROR, format!("writing output: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
