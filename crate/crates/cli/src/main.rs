//! `atanfd`: simulate the arctan-fast diffusion family, fuzz its Sobolev
//! inequalities, and list initial-data presets.

mod commands;
mod config;
mod emit;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::{RawFuzz, RawRun};

#[derive(Parser)]
#[command(
    name = "atanfd",
    version,
    about = "Pseudo-spectral solver and property verifier for the arctan-fast diffusion equation on the circle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a model and write one diagnostics row per record
    Simulate(SimulateArgs),
    /// Evaluate both nonlinear Sobolev inequalities on random densities
    Fuzz(FuzzArgs),
    /// List the initial-data presets and their parameter constraints
    Presets,
}

/// Flags mirror config-file keys exactly; flags override file values.
#[derive(Args)]
struct SimulateArgs {
    /// `key = value` config file (# comments)
    #[arg(long)]
    config: Option<PathBuf>,
    /// arctan | log | nonlocal | regularized
    #[arg(long)]
    model: Option<String>,
    /// grid points (power of two >= 8)
    #[arg(long)]
    n: Option<usize>,
    /// fraction of the stability bound, in (0, 1]
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long = "t_end")]
    t_end: Option<f64>,
    /// diagnostics sampling interval
    #[arg(long = "record_every")]
    record_every: Option<f64>,
    /// e.g. cosine_bump(0.5); see `atanfd presets`
    #[arg(long)]
    preset: Option<String>,
    /// file with n samples, one per line (alternative to --preset)
    #[arg(long = "initial_data")]
    initial_data: Option<PathBuf>,
    /// artificial viscosity (regularized model only)
    #[arg(long)]
    epsilon: Option<f64>,
    /// mollification time (regularized model only)
    #[arg(long)]
    kappa: Option<f64>,
    /// initial-data lift (regularized model only)
    #[arg(long)]
    delta: Option<f64>,
    /// Hilbert multiplier sign, +1 or -1
    #[arg(long = "hilbert_sign", allow_hyphen_values = true)]
    hilbert_sign: Option<f64>,
    #[arg(long = "max_steps")]
    max_steps: Option<u64>,
    #[arg(long = "positivity_floor")]
    positivity_floor: Option<f64>,
    /// diagnostics file path
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct FuzzArgs {
    /// `key = value` config file (# comments)
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<u64>,
    /// base seed; trial i uses seed0 + i
    #[arg(long)]
    seed0: Option<u64>,
    /// grid points (power of two >= 8)
    #[arg(long)]
    n: Option<usize>,
    /// highest Fourier mode of the trials
    #[arg(long = "max_mode")]
    max_mode: Option<usize>,
    /// positivity floor of the pre-normalization profile, in (0, 1)
    #[arg(long = "min_floor")]
    min_floor: Option<f64>,
    /// spectral decay k^(-amplitude_decay) of the trial coefficients
    #[arg(long = "amplitude_decay")]
    amplitude_decay: Option<f64>,
    /// fail when any margin drops below -tolerance
    #[arg(long, allow_hyphen_values = true)]
    tolerance: Option<f64>,
    /// per-trial margin report path
    #[arg(long)]
    report: Option<PathBuf>,
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Simulate(args) => {
            let flags = RawRun {
                model: args.model,
                n: args.n,
                cfl: args.cfl,
                t_end: args.t_end,
                record_every: args.record_every,
                preset: args.preset,
                initial_data: args.initial_data,
                epsilon: args.epsilon,
                kappa: args.kappa,
                delta: args.delta,
                hilbert_sign: args.hilbert_sign,
                max_steps: args.max_steps,
                positivity_floor: args.positivity_floor,
                output: args.output,
                format: args.format,
            };
            let raw = match &args.config {
                Some(path) => match RawRun::from_file(path) {
                    Ok(file) => file.overlay(flags),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return commands::EXIT_CONFIG;
                    }
                },
                None => flags,
            };
            match raw.resolve() {
                Ok(cfg) => commands::cmd_simulate(cfg),
                Err(e) => {
                    eprintln!("error: {e}");
                    commands::EXIT_CONFIG
                }
            }
        }
        Command::Fuzz(args) => {
            let flags = RawFuzz {
                trials: args.trials,
                seed0: args.seed0,
                n: args.n,
                max_mode: args.max_mode,
                min_floor: args.min_floor,
                amplitude_decay: args.amplitude_decay,
                tolerance: args.tolerance,
                report: args.report,
            };
            let raw = match &args.config {
                Some(path) => match RawFuzz::from_file(path) {
                    Ok(file) => file.overlay(flags),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return commands::EXIT_CONFIG;
                    }
                },
                None => flags,
            };
            match raw.resolve() {
                Ok(cfg) => commands::cmd_fuzz(cfg),
                Err(e) => {
                    eprintln!("error: {e}");
                    commands::EXIT_CONFIG
                }
            }
        }
        Command::Presets => commands::cmd_presets(),
    }
}

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => commands::EXIT_CONFIG,
            };
            let _ = e.print();
            code
        }
    };
    std::process::exit(code);
}
