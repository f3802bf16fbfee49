//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 I/O error.

pub mod commands;
pub mod config;
pub mod units;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::schemes::Method;
use config::{CliOverrides, RunConfig};
use units::Dim;

#[derive(Debug, Parser)]
#[command(
    name = "biphoton",
    version,
    about = "Joint spectral amplitudes of photon pairs from dual-pump SpFWM"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Calibrate and evaluate one configuration.
    Run(CommonArgs),
    /// Purity against waveguide length for one or more effect sets.
    Sweep(CommonArgs),
    /// Statistics over independent fluctuation realizations.
    Ensemble(CommonArgs),
    /// Compare split-step against the closed form and tabulate step convergence.
    Validate(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (default `out`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Longitudinal step, e.g. `0.005` or `5mm`.
    #[arg(long, value_parser = length_arg)]
    pub dz: Option<f64>,
    /// Points per time axis (power of two).
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Comma list of df, npm, gvd; `none` for the bare process.
    #[arg(long)]
    pub effects: Option<String>,
    /// asymmetric, collision or custom.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Comma list of lengths for `sweep`, e.g. `0.5,1,2` or `50cm,1m`.
    #[arg(long, value_delimiter = ',', value_parser = length_arg)]
    pub lengths: Option<Vec<f64>>,
    /// Waveguide length for `run`, `ensemble` and `validate`.
    #[arg(long, value_parser = length_arg)]
    pub length: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Realizations for `ensemble`, or per DF point in `sweep`.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Closed form for `validate`: no_gvd or hod.
    #[arg(long)]
    pub regime: Option<String>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum MethodArg {
    SplitStep,
    Analytic,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::SplitStep => Method::SplitStep,
            MethodArg::Analytic => Method::Analytic,
        }
    }
}

fn length_arg(s: &str) -> std::result::Result<f64, String> {
    units::parse(s, Dim::Length)
}

impl CommonArgs {
    fn overrides(&self) -> CliOverrides {
        CliOverrides {
            scheme: self.scheme.clone(),
            seed: self.seed,
            dz: self.dz,
            grid_n: self.grid_n,
            effects: self.effects.clone(),
            lengths: self.lengths.clone(),
            out: self.out.clone(),
            method: self.method.map(Method::from),
            length: self.length,
            paths: self.paths,
            regime: self.regime.clone(),
        }
    }

    fn load(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        cfg.apply(&self.overrides());
        Ok(cfg)
    }
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 3,
        Error::Calibration(_) | Error::NonFinite(_) | Error::Svd | Error::ZeroField => 2,
        Error::GridSize(_)
        | Error::InvalidParameter { .. }
        | Error::WrongDomain { .. }
        | Error::GridMismatch
        | Error::NonUniformGrid
        | Error::OutOfRange { .. }
        | Error::DegenerateWalkOff
        | Error::Config(_) => 1,
    }
}

/// Execute a parsed command line.
pub fn execute(cli: &Cli) -> Result<()> {
    let (name, args) = match &cli.command {
        Command::Run(a) => ("run", a),
        Command::Sweep(a) => ("sweep", a),
        Command::Ensemble(a) => ("ensemble", a),
        Command::Validate(a) => ("validate", a),
    };
    let cfg = args.load()?;
    let r = cfg.resolve()?;
    log::info!(
        "{name}: {} scheme, effects {}, grid {}",
        r.spec.name,
        r.spec.effects.label(),
        r.spec.grid.n
    );
    match &cli.command {
        Command::Run(_) => {
            let out = commands::run(&cfg, &r)?;
            println!(
                "purity {} schmidt_number {} pair_probability {} power_scale {}",
                out.report.purity,
                out.report.schmidt_number,
                out.report.pair_probability,
                out.calibration.scale
            );
            if let Some(meta) = &out.propagation {
                for w in &meta.warnings {
                    println!("warning: {w}");
                }
            }
        }
        Command::Sweep(_) => {
            for row in commands::sweep(&cfg, &r)? {
                println!("{} L={} purity {}", row.effects, row.length, row.purity);
            }
        }
        Command::Ensemble(_) => {
            let s = commands::ensemble(&cfg, &r)?;
            println!(
                "paths {} mean {} std {} q05 {} q50 {} q95 {}",
                s.paths, s.mean, s.std, s.q05, s.q50, s.q95
            );
        }
        Command::Validate(_) => {
            let v = commands::validate_cmd(&cfg, &r)?;
            println!(
                "{} fidelity {} purity split-step {} closed form {}",
                v.regime, v.fidelity, v.purity_split_step, v.purity_analytic
            );
            for row in &v.convergence {
                match row.ratio {
                    Some(q) => println!("dz {} error {} ratio {q}", row.dz, row.error),
                    None => println!("dz {} error {}", row.dz, row.error),
                }
            }
        }
    }
    println!("outputs in {}", r.out_dir.display());
    Ok(())
}

/// Entry point for the `biphoton` binary.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
