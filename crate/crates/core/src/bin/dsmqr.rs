use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dsmqr::basis::DiskParams;
use dsmqr::complexgeom::build_layout;
use dsmqr::harness::{self, ExperimentConfig};
use dsmqr::solver::{Basis, Method};
use dsmqr::{oracle, Error};

#[derive(Parser)]
#[command(
    name = "dsmqr",
    version,
    about = "Dipole simulation method solvers for the Laplace equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one case and print the result as key=value lines.
    Solve {
        config: PathBuf,
        /// Number of sources (odd).
        #[arg(long = "n")]
        n: usize,
        /// Method; defaults to the first one in the config.
        #[arg(long)]
        method: Option<Method>,
    },
    /// Run the configured sweep and write CSV.
    Sweep {
        config: PathBuf,
        /// Output file; overrides `out` in the config. Default is stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate basis functions on a polar grid as k,s,theta,value rows.
    BasisDump {
        config: PathBuf,
        #[arg(long = "n")]
        n: usize,
        #[arg(long)]
        method: Option<Method>,
        /// Number of radii in [0, 1].
        #[arg(long, default_value_t = 5)]
        radial: usize,
        /// Number of angles in [0, 2π).
        #[arg(long, default_value_t = 16)]
        angular: usize,
    },
    /// Run the oracle cross-checks.
    Verify,
}

enum Failure {
    Config(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::Config(_) => Failure::Config(err.to_string()),
            _ => Failure::Run(err.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::Run(err.to_string())
    }
}

fn pick_method(config: &ExperimentConfig, method: Option<Method>) -> Result<Method, Failure> {
    let method = method.unwrap_or(config.methods[0]);
    if !method.supports(&config.geometry) {
        return Err(Failure::Config(format!(
            "method {method} does not support geometry {}",
            config.geometry
        )));
    }
    Ok(method)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Solve { config, n, method } => {
            let config = ExperimentConfig::from_file(config)?;
            let method = pick_method(&config, method)?;
            let row = harness::run_single(&config, method, n);
            harness::write_key_values(&mut io::stdout().lock(), &row)?;
            Ok(row.residual_linf.is_some())
        }
        Command::Sweep { config, out } => {
            let config = ExperimentConfig::from_file(config)?;
            let rows = harness::run_sweep(&config);
            match out.or_else(|| config.out.clone()) {
                Some(path) => {
                    let mut file = BufWriter::new(File::create(&path)?);
                    harness::write_csv(&mut file, &rows)?;
                    file.flush()?;
                }
                None => harness::write_csv(&mut io::stdout().lock(), &rows)?,
            }
            Ok(true)
        }
        Command::BasisDump {
            config,
            n,
            method,
            radial,
            angular,
        } => {
            let config = ExperimentConfig::from_file(config)?;
            let method = pick_method(&config, method)?;
            let params = DiskParams::new(config.rho, config.radius, n, config.alpha)?;
            let layout = build_layout(&config.geometry, n, params.p, config.rho, config.radius)?;
            let basis = Basis::new(method, &params, &layout, &config.geometry)?;
            let rows = harness::basis_dump(&basis, radial, angular)?;
            harness::write_basis_dump(&mut io::stdout().lock(), &rows)?;
            Ok(true)
        }
        Command::Verify => {
            let outcomes = oracle::run_all();
            for outcome in &outcomes {
                println!("{outcome}");
            }
            Ok(outcomes.iter().all(|o| o.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("dsmqr: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("dsmqr: {msg}");
            ExitCode::from(1)
        }
    }
}
