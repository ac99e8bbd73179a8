//! `entroscale`: entropy density, finite-window sweeps and small-window
//! oracle checks for quasifree fermionic chains driven by a JSON config.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "entroscale", version, about = "Entropy density of R/L mover states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral case, band polynomials, zero set and momentum partition.
    Classify(Common),
    /// Asymptotic entropy density with partition, energy range and verdict.
    Density(Common),
    /// Finite-window entropies for a list of window sizes.
    Sweep(Common),
    /// Exact small-window checks against the Fock-space construction.
    Oracle(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Window size(s).
    #[arg(long, num_args = 1.., conflicts_with = "nu_list")]
    nu: Vec<usize>,
    /// Comma-separated window sizes.
    #[arg(long, value_delimiter = ',')]
    nu_list: Vec<usize>,
    /// FFT grid size for smooth symbols.
    #[arg(long)]
    fft_size: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Common {
    fn nus(&self, cfg: &RunConfig) -> Vec<usize> {
        if !self.nu.is_empty() {
            self.nu.clone()
        } else if !self.nu_list.is_empty() {
            self.nu_list.clone()
        } else {
            cfg.run.nu.clone()
        }
    }
}

fn threads(parallel: bool) -> Result<usize, CliError> {
    let cap = match std::env::var("ENTROSCALE_THREADS") {
        Ok(s) => Some(
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Config(format!("ENTROSCALE_THREADS = {s:?} is not a positive integer")))?,
        ),
        Err(_) => None,
    };
    if !parallel {
        return Ok(1);
    }
    Ok(cap.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (args, parallel) = match &cli.command {
        Command::Sweep(a) => (a, true),
        Command::Classify(a) | Command::Density(a) | Command::Oracle(a) => (a, false),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads(parallel)?)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let cfg = RunConfig::load(&args.config)?;
    let fft_size = args.fft_size.or(cfg.run.fft_size);
    let format = args.format;
    let text = pool.install(|| -> Result<String, CliError> {
        match &cli.command {
            Command::Classify(_) => {
                only_json(format, "classify")?;
                Ok(output::json(&commands::classify(&cfg.model()?)?))
            }
            Command::Density(_) => {
                let d = commands::density(&cfg.supported_model()?)?;
                Ok(match format {
                    Some(Format::Csv) => commands::density_csv(&d),
                    _ => output::json(&d),
                })
            }
            Command::Sweep(a) => {
                let rows = commands::sweep(&cfg.supported_model()?, &a.nus(&cfg), fft_size)?;
                Ok(match format {
                    Some(Format::Json) => output::json(&rows),
                    _ => output::sweep_csv(&rows),
                })
            }
            Command::Oracle(a) => {
                only_json(format, "oracle")?;
                let nus = a.nus(&cfg);
                if nus.len() > 1 {
                    return Err(CliError::Config("oracle takes a single nu".into()));
                }
                let nu = nus.first().copied().unwrap_or(3);
                if !commands::ORACLE_NU.contains(&nu) {
                    return Err(CliError::Config(format!("oracle needs 2 <= nu <= 5, got {nu}")));
                }
                let r = commands::oracle(&cfg.supported_model()?, nu)?;
                let text = output::json(&r);
                if let Some(c) = r.first_failure() {
                    emit(&text, args.out.as_ref())?;
                    return Err(CliError::Oracle(format!(
                        "{} = {:e} exceeds {:e}",
                        c.name, c.value, c.tolerance
                    )));
                }
                Ok(text)
            }
        }
    })?;
    emit(&text, args.out.as_ref())
}

fn only_json(format: Option<Format>, cmd: &str) -> Result<(), CliError> {
    if format == Some(Format::Csv) {
        return Err(CliError::Config(format!("{cmd} only writes JSON")));
    }
    Ok(())
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("entroscale: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
