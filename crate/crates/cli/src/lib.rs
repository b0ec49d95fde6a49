//! Command-line front end for `sympovm`: argument parsing, JSON encoding of
//! matrices and states, and one report per invocation.

pub mod commands;
pub mod error;
pub mod json;
pub mod render;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::RunReport;
pub use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(
    name = "sympovm",
    version,
    about = "Spherical tensor POVMs, qubit dilation and measurement"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Numerical tolerance for state validation, coalescing and the PPT verdict.
    #[arg(long, env = "POVM_EPS", global = true)]
    pub eps: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the spherical tensor POVM for spin j.
    Povm {
        /// Spin as an integer or "p/2", e.g. 1 or 3/2.
        #[arg(long)]
        j: String,
        /// Merge elements with equal matrices.
        #[arg(long)]
        coalesce: bool,
    },
    /// Dilate one element to the 2j-qubit register and expand it in Pauli strings.
    Dilate {
        #[arg(long)]
        j: String,
        #[arg(long)]
        n_qubits: Option<usize>,
        /// Element label, e.g. "k=1,q=+1".
        #[arg(long)]
        element: String,
        #[arg(long)]
        coalesce: bool,
    },
    /// Measure a state read from a JSON file.
    Measure {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        j: Option<String>,
        #[arg(long)]
        n_qubits: Option<usize>,
        #[arg(long, conflicts_with = "sample")]
        element: Option<String>,
        /// Number of simulated shots.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        coalesce: bool,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: commands::Suite,
        /// Dimensions for the random suite, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs one parsed invocation; returns the report and whether all checks passed.
pub fn run(cli: &Cli) -> Result<(RunReport, bool), CliError> {
    let eps = match cli.eps {
        None => sympovm::tol::EPS,
        Some(e) if e.is_finite() && e > 0.0 => e,
        Some(e) => {
            return Err(CliError::Usage(format!(
                "tolerance must be positive and finite, got {e}"
            )))
        }
    };
    let report = match &cli.command {
        Command::Povm { j, coalesce } => commands::povm(j, *coalesce, eps)?,
        Command::Dilate {
            j,
            n_qubits,
            element,
            coalesce,
        } => commands::dilate(j, *n_qubits, element, *coalesce, eps)?,
        Command::Measure {
            state,
            j,
            n_qubits,
            element,
            sample,
            seed,
            coalesce,
        } => {
            let args = commands::MeasureArgs {
                state: state.clone(),
                j: j.clone(),
                n_qubits: *n_qubits,
                element: element.clone(),
                sample: *sample,
                seed: *seed,
                coalesce: *coalesce,
            };
            commands::measure(&args, eps)?
        }
        Command::Verify { suite, dims, seed } => commands::verify(*suite, dims, *seed, eps)?,
    };
    let passed = report.outputs.get("passed").and_then(|v| v.as_bool()).unwrap_or(true);
    Ok((report, passed))
}

pub fn render(report: &RunReport, format: Format) -> Result<String, CliError> {
    let value = serde_json::to_value(report).map_err(|e| CliError::Output(e.to_string()))?;
    match format {
        Format::Json => serde_json::to_string_pretty(&value).map_err(|e| CliError::Output(e.to_string())),
        Format::Pretty => Ok(render::pretty(&value)),
    }
}
