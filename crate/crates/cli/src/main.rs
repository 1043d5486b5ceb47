use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dirac_complex::suites::{cmd_solve, cmd_verify, resolution_sweep, Scope, SolveParams, VerifyParams};
use dirac_complex::{Error, Report};

#[derive(Parser)]
#[command(
    name = "dirac-lab",
    version,
    about = "Verification lab and spectral solver for the Dirac complex in k vector variables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a JSON report.
    Verify {
        #[arg(long, default_value = "all", value_parser = ["clifford", "weyl", "complex", "ellipticity", "boundary", "all"])]
        scope: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replace every residual threshold by this value.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Refuse to run when the 𝒟₂ checks are unavailable (k < 3).
        #[arg(long)]
        require_d2: bool,
    },
    /// Solve 𝒟₀u = f for f = 𝒟₀φ with φ a bump, and check recovery.
    Solve {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Grid points per axis.
        #[arg(long = "N", default_value_t = 32)]
        side: usize,
        #[arg(long, default_value_t = 0.6)]
        radius: f64,
        /// Cell period L (default 2π).
        #[arg(long, default_value_t = 2.0 * std::f64::consts::PI)]
        period: f64,
        #[arg(long)]
        tol: Option<f64>,
        /// Distance from the support beyond which u must vanish.
        #[arg(long, default_value_t = 0.3)]
        margin: f64,
        /// Directory for report.json and the phi/f/u field dumps.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Corrupt f so that 𝒟₁f ≠ 0; the solve must refuse it.
        #[arg(long)]
        break_compat: bool,
        /// Run N = 16, 24, 32 and check that the error decreases.
        #[arg(long)]
        sweep: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource(_) => 3,
        Error::Compatibility(_) => 4,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn emit(report: &Report, out: Option<PathBuf>) -> Result<(), Error> {
    let json = report.to_json();
    match out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify { scope, k, n, samples, seed, tol, out, require_d2 } => {
            let p = VerifyParams { scope: Scope::parse(&scope)?, k, n, samples, seed, tol, require_d2 };
            let report = cmd_verify(&p)?;
            for c in report.failures() {
                eprintln!("FAIL {}: {}", c.name, c.value);
            }
            emit(&report, out)?;
            Ok(report.pass)
        }
        Command::Solve { k, n, side, radius, period, tol, margin, out, break_compat, sweep } => {
            let p = SolveParams {
                k,
                n,
                side,
                radius,
                period,
                center: None,
                tol,
                margin,
                break_compat,
                out_dir: out.clone(),
            };
            let report = if sweep { resolution_sweep(&p, &[16, 24, 32])?.0 } else { cmd_solve(&p)?.report };
            for c in report.failures() {
                eprintln!("FAIL {}: {}", c.name, c.value);
            }
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)?;
            }
            emit(&report, out.map(|d| d.join("report.json")))?;
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
