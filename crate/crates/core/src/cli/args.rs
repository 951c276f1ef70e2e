use std::ffi::OsString;
use std::io;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::{
    cmd_fig1, cmd_grid, cmd_limit, cmd_verify, CliError, LimitStudy, OutputFormat, PhaseGrid,
};
use crate::models::{Model, OscillatorParams};
use crate::suites::{Suite, SuiteOptions};

#[derive(Debug, Parser)]
#[command(
    name = "scwigner",
    version,
    about = "Wigner functions of the semiconfined harmonic oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one Wigner function on a phase-space grid.
    Grid(GridArgs),
    /// Emit the nine ground-state panels (a = 2, 4, canonical) x (g = 0, 2, 4).
    Fig1(Fig1Args),
    /// Run verification suites and write a JSON report.
    Verify(VerifyArgs),
    /// Measure convergence to the canonical Wigner function as a grows.
    Limit(LimitArgs),
}

#[derive(Debug, Args)]
struct Constants {
    #[arg(long, default_value_t = 1.0)]
    m0: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

#[derive(Debug, Args)]
struct Window {
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    pmin: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pmax: f64,
    #[arg(long, default_value_t = 121)]
    np: usize,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    xmin: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    xmax: f64,
    #[arg(long, default_value_t = 121)]
    nx: usize,
}

impl Window {
    fn grid(&self) -> Result<PhaseGrid, CliError> {
        PhaseGrid::new(self.pmin, self.pmax, self.np, self.xmin, self.xmax, self.nx)
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value = "semiconfined")]
    model: Model,
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, default_value_t = 2.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    g: f64,
    #[command(flatten)]
    constants: Constants,
    #[command(flatten)]
    window: Window,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct Fig1Args {
    #[command(flatten)]
    constants: Constants,
    #[command(flatten)]
    window: Window,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Output directory.
    #[arg(long, default_value = "fig1")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Replaces the primary tolerance of each selected suite.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value = "verification_report.json")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    g: f64,
    /// Comma-separated, strictly increasing confinement lengths.
    #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
    a: Vec<f64>,
    #[command(flatten)]
    constants: Constants,
    #[command(flatten)]
    window: Window,
    /// Largest acceptable error at the last confinement length.
    #[arg(long, default_value_t = 0.02)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn params(c: &Constants, a: f64, g: f64) -> OscillatorParams {
    OscillatorParams {
        m0: c.m0,
        omega: c.omega,
        hbar: c.hbar,
        a,
        g,
    }
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Grid(args) => {
            let files = cmd_grid(
                args.model,
                args.n,
                params(&args.constants, args.a, args.g),
                args.window.grid()?,
                args.format,
                &args.out,
            )?;
            files.iter().for_each(|f| println!("{}", f.display()));
            Ok(true)
        }
        Command::Fig1(args) => {
            let files = cmd_fig1(
                params(&args.constants, 1.0, 0.0),
                args.window.grid()?,
                args.format,
                &args.out,
            )?;
            files.iter().for_each(|f| println!("{}", f.display()));
            Ok(true)
        }
        Command::Verify(args) => {
            let suites = Suite::select(&args.suite).map_err(CliError::Usage)?;
            if let Some(t) = args.tol {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
                }
            }
            cmd_verify(
                &suites,
                &SuiteOptions { tol: args.tol },
                &args.out,
                io::stdout(),
            )
        }
        Command::Limit(args) => cmd_limit(
            LimitStudy {
                n: args.n,
                g: args.g,
                a_values: args.a,
                grid: args.window.grid()?,
                base: params(&args.constants, 1.0, 0.0),
                threshold: args.tol,
            },
            args.out.as_deref(),
            io::stdout(),
        ),
    }
}

/// Parses `argv` and runs the command; returns the process exit status
/// (0 success, 1 verification failure, 2 usage or I/O error, 3 numerical failure).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
