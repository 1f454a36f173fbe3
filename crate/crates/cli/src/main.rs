use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fcat_cli::commands::{cmd_fidelity, cmd_gates, cmd_selftest, cmd_sweep, XiChoice};
use fcat_cli::config::Overrides;
use fcat_cli::CliError;

/// Deformed vs undeformed cat-state qubits: sweeps, fidelity curves, gates.
#[derive(Debug, Parser)]
#[command(name = "fcat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Δ and d over the ξ grid (CSV `xi,valid,delta,distance` + sweep_meta.json).
    Sweep {
        #[command(flatten)]
        common: Overrides,
    },
    /// F₊ and F₋ versus γt (CSV `gamma_t,eta,f_plus,f_minus` + fidelity_check.json).
    Fidelity {
        #[command(flatten)]
        common: Overrides,
        /// A number, `identity`, or `star` for the sweep's ξ*.
        #[arg(long, default_value = "identity")]
        xi: XiChoice,
    },
    /// JSON report on the rotation and conditional-phase gates.
    Gates {
        #[command(flatten)]
        common: Overrides,
        #[arg(long, default_value = "identity")]
        xi: XiChoice,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = std::f64::consts::PI, allow_negative_numbers = true)]
        chi_t: f64,
    },
    /// Runs the invariant checks and prints a JSON summary.
    Selftest {
        #[command(flatten)]
        common: Overrides,
        /// Extra damping parameters to check (repeatable).
        #[arg(long, allow_negative_numbers = true)]
        eta: Vec<f64>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let written = match cli.command {
        Command::Sweep { common } => cmd_sweep(&common.resolve()?)?,
        Command::Fidelity { common, xi } => cmd_fidelity(&common.resolve()?, xi)?,
        Command::Gates {
            common,
            xi,
            theta,
            chi_t,
        } => cmd_gates(&common.resolve()?, xi, theta, chi_t)?,
        Command::Selftest { common, eta } => {
            let report = cmd_selftest(&common.resolve()?, &eta);
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("selftest report serializes")
            );
            return Ok(report.exit_code);
        }
    };
    for f in &written.files {
        eprintln!("wrote {}", f.display());
    }
    eprintln!("{}", written.summary);
    Ok(fcat_cli::EXIT_OK)
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
