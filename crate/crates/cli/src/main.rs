use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use oneport_cli::commands;
use oneport_cli::reproduce::{CaseId, CaseParams};
use oneport_cli::CliError;

#[derive(Parser)]
#[command(name = "oneport", version, about = "Simulate adjustable one-port devices and audit their energy")]
struct Cli {
    /// Sample step override (s).
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Quadrature relative and ODE refinement tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its trajectory as CSV.
    Simulate {
        #[arg(short, long)]
        scenario: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reproduce a worked example or device identity.
    Reproduce {
        /// Case id; omit with --all.
        #[arg(required_unless_present = "all", value_parser = parse_case)]
        id: Option<CaseId>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "L")]
        l: Option<f64>,
        #[arg(long, conflicts_with = "id")]
        all: bool,
    },
    /// Search a trajectory family for unbounded energy extraction.
    Falsify {
        #[arg(short, long)]
        scenario: PathBuf,
        #[arg(long)]
        n_max: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Sweep the coil self-inductance and report flux drift.
    DriftSweep {
        #[arg(long = "L", value_delimiter = ',', required = true)]
        inductances: Vec<f64>,
        #[arg(short, long)]
        scenario: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn parse_case(s: &str) -> Result<CaseId, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { scenario, output } => {
            let summary = commands::simulate(&scenario, output.as_deref(), cli.dt, cli.tol)?;
            println!("{summary}");
        }
        Command::Reproduce { id, n, l, all: _ } => {
            let ids: Vec<CaseId> = id.into_iter().collect();
            let cases = commands::reproduce_cases(&ids, CaseParams { n, l }, cli.tol)?;
            for case in &cases {
                print!("{case}");
            }
            let failed = cases.iter().filter(|c| !c.pass).count();
            if failed > 0 {
                return Err(CliError::Mismatch(failed));
            }
        }
        Command::Falsify {
            scenario,
            n_max,
            output,
        } => {
            let cert = commands::falsify(&scenario, n_max, &output, cli.tol)?;
            println!("{} on {}: {:?}", cert.law, cert.generator, cert.verdict);
            for (n, e) in cert.indices.iter().zip(&cert.energies) {
                println!("  E_{n} = {e:.12e}");
            }
            println!(
                "  slope {:.6e}, t-statistic {:.3e} -> {}",
                cert.trend.slope,
                cert.trend.t_statistic,
                output.display()
            );
        }
        Command::DriftSweep {
            inductances,
            scenario,
            output,
        } => {
            let rows = commands::drift_sweep(&scenario, &inductances, &output, cli.dt, cli.tol)?;
            println!("{}", commands::DRIFT_HEADER);
            for row in rows {
                println!("{:e},{:.6e},{:.6e}", row[0], row[1], row[2]);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("oneport: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
