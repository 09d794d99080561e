//! Command-line front end.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use wavesolve::config::RunConfig;
use wavesolve::{driver, SolverError};

#[derive(Parser)]
#[command(
    name = "wavesolve",
    about = "DPG solver with perfectly matched layers for 2D time-harmonic waves",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON run configuration; defaults reproduce the reference scattering
    /// setup (omega = 6 pi, p = 4, 12x12 mesh minus the 4x4 hole, C = 5).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (report JSON, or CSV for `export`); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dotted-path config overrides, e.g. --override pml.C=0 --override p=2.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scattering problem and report interior errors.
    Solve(CommonArgs),
    /// Run both acoustic PML variants and compare fields and traces.
    Compare(CommonArgs),
    /// Manufactured plane-wave convergence study (square domain, no PML).
    Converge(CommonArgs),
    /// Solve and export field samples on a uniform grid as CSV.
    Export {
        #[command(flatten)]
        common: CommonArgs,
        /// Sample grid resolution (overrides outputs.sample_grid).
        #[arg(long)]
        grid: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let payload = serde_json::json!({
                "error": { "category": err.category(), "message": err.to_string() }
            });
            eprintln!("{payload}");
            match err.category() {
                "argument" | "config" | "serde" => ExitCode::from(2),
                "numerical" => ExitCode::from(3),
                _ => ExitCode::from(4),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), SolverError> {
    match cli.command {
        Command::Solve(common) => {
            let config = RunConfig::load(common.config.as_deref(), &common.overrides)?;
            let out = common.out.clone().or_else(|| {
                config.outputs.report_path.as_ref().map(PathBuf::from)
            });
            let text = match &config.outputs.field_samples_path {
                Some(samples) => {
                    let (report, csv) =
                        driver::run_with_export(&config, config.outputs.sample_grid)?;
                    std::fs::write(samples, csv)?;
                    serde_json::to_string_pretty(&report)?
                }
                None => serde_json::to_string_pretty(&driver::run_experiment(&config)?)?,
            };
            emit(out.as_deref(), &text)
        }
        Command::Compare(common) => {
            let config = RunConfig::load(common.config.as_deref(), &common.overrides)?;
            let report = driver::compare_formulations(&config)?;
            let text = serde_json::to_string_pretty(&report)?;
            let out = common.out.clone().or_else(|| {
                config.outputs.report_path.as_ref().map(PathBuf::from)
            });
            emit(out.as_deref(), &text)
        }
        Command::Converge(common) => {
            let config = match common.config {
                Some(ref path) => RunConfig::load(Some(path), &common.overrides)?,
                None => {
                    // study defaults: unit square, one wavelength, no PML
                    let mut value = serde_json::to_value(RunConfig::default())?;
                    let study = [
                        "omega=6.283185307179586".to_string(),
                        "mesh.n_int=4".to_string(),
                        "mesh.n_pml=0".to_string(),
                        "mesh.l=1.0".to_string(),
                        "mesh.L=1.0".to_string(),
                        "mesh.hole=0.0".to_string(),
                        "pml.C=0.0".to_string(),
                    ];
                    wavesolve::config::apply_overrides(&mut value, &study)?;
                    wavesolve::config::apply_overrides(&mut value, &common.overrides)?;
                    let cfg: RunConfig = serde_json::from_value(value)?;
                    cfg.validate()?;
                    cfg
                }
            };
            let report = driver::convergence_study(&config)?;
            let text = serde_json::to_string_pretty(&report)?;
            emit(common.out.as_deref(), &text)
        }
        Command::Export { common, grid } => {
            let config = RunConfig::load(common.config.as_deref(), &common.overrides)?;
            let grid = grid.unwrap_or(config.outputs.sample_grid);
            let csv = driver::export_fields(&config, grid)?;
            let out = common.out.clone().or_else(|| {
                config.outputs.field_samples_path.as_ref().map(PathBuf::from)
            });
            emit(out.as_deref(), &csv)
        }
    }
}

fn emit(path: Option<&std::path::Path>, text: &str) -> Result<(), SolverError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => println!("{text}"),
    }
    Ok(())
}
