//! `salary`: evaluate researcher salaries, envelopes, calibration and
//! sensitivity from JSON inputs.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "salary", version, about = "Nonlinear researcher salary model")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Parameters file (JSON). Defaults to the built-in parameter set.
    #[arg(long, global = true, value_name = "PATH")]
    pub params: Option<PathBuf>,
    /// Profiles file (JSON array of named profiles).
    #[arg(long, global = true, value_name = "PATH")]
    pub profiles: Option<PathBuf>,
    /// Envelope mode.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Consistent)]
    pub mode: ModeArg,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Print each component's formula with substituted values to stderr.
    #[arg(long, global = true)]
    pub explain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    Consistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Component breakdown for every profile, in input order.
    Evaluate,
    /// Minimum, optimal and maximum salary, plus figure data.
    Envelope {
        /// Figure data CSV (label,amount_kzt).
        #[arg(long, value_name = "PATH", default_value = "figure_data.csv")]
        figure: PathBuf,
    },
    /// Fit free parameters to anchor values.
    Calibrate {
        /// Anchors file. Defaults to the built-in reference anchors.
        #[arg(long, value_name = "PATH")]
        anchors: Option<PathBuf>,
        /// Where to write the fitted parameters.
        #[arg(long, value_name = "PATH", default_value = "fitted_params.json")]
        fitted: PathBuf,
    },
    /// Per-metric gradient and elasticity of the total salary.
    Sensitivity {
        /// Name of the profile to analyse.
        #[arg(long, value_name = "NAME")]
        profile: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Evaluate => commands::evaluate(&cli.common),
        Command::Envelope { figure } => commands::envelope(&cli.common, &figure),
        Command::Calibrate { anchors, fitted } => commands::calibrate(&cli.common, anchors.as_deref(), &fitted),
        Command::Sensitivity { profile } => commands::sensitivity(&cli.common, &profile),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Output(err.to_string())
    }
}
