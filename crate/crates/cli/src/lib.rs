//! Command-line workflows around the `histspline` estimator: corpus
//! generation, density estimation with CSV export, and KL comparison of
//! exported curves.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
mod error;
pub mod io;

pub use commands::{cmd_compare, cmd_estimate, cmd_generate, CompareReport, EstimateSummary, GenerateSummary};
pub use config::{EstimateOverrides, FileConfig, GeneratorOverrides, RunConfig};
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "histspline", version, about = "Histogram cubic-spline density estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an emergency-braking corpus as CSV (series_id, t, x).
    Generate(GenerateArgs),
    /// Estimate a density and export histogram, curve, and summary.
    Estimate(EstimateArgs),
    /// KL divergence in both directions between two exported curves.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the fully resolved config as TOML and exit.
    #[arg(long)]
    pub emit_config: bool,
    /// Directory for output files.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub generator: GeneratorOverrides,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub estimate: EstimateOverrides,
    #[command(flatten)]
    pub generator: GeneratorOverrides,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// First curve CSV (u, pdf).
    pub a: PathBuf,
    /// Second curve CSV (u, pdf).
    pub b: PathBuf,
    /// Points of the common comparison grid.
    #[arg(long, default_value_t = config::DEFAULT_GRID)]
    pub grid: usize,
}

fn resolve(
    common: &CommonArgs,
    generator: &GeneratorOverrides,
    estimate: &EstimateOverrides,
) -> Result<RunConfig> {
    let file = common.config.as_deref().map(config::load_file).transpose()?;
    Ok(RunConfig::resolve(
        file.as_ref(),
        common.out_dir.as_deref(),
        generator,
        estimate,
    ))
}

fn emit_config(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    out.write_all(config.to_toml().as_bytes())
        .map_err(|e| CliError::Io {
            path: "<stdout>".into(),
            source: e,
        })
}

/// Runs one parsed command line, writing reports to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Generate(args) => {
            let config = resolve(&args.common, &args.generator, &EstimateOverrides::default())?;
            if args.common.emit_config {
                return emit_config(&config, out);
            }
            cmd_generate(&config, out).map(drop)
        }
        Command::Estimate(args) => {
            let config = resolve(&args.common, &args.generator, &args.estimate)?;
            if args.common.emit_config {
                return emit_config(&config, out);
            }
            cmd_estimate(&config, out).map(drop)
        }
        Command::Compare(args) => cmd_compare(&args.a, &args.b, args.grid, out).map(drop),
    }
}
