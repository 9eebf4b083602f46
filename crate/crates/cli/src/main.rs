//! Thermal coherent states of su(2), su(1,1) and the harmonic oscillator:
//! density operators, fidelity scans, Wigner grids and self-verification.
//!
//! Exit codes: 0 success, 1 verification or numeric-equivalence failure,
//! 2 invalid input, 3 resource cap or truncation certification failure.

use clap::Parser;
use thermal_coset::error::CosetError;

mod cmd_fidelity;
mod cmd_rho;
mod cmd_verify;
mod cmd_wigner;
mod config;
mod output;

pub const EXIT_VERIFY_FAILURE: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_RESOURCE_CAP: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID_INPUT, message: message.into() }
    }

    pub fn invalid(err: CosetError) -> Self {
        let code = match &err {
            CosetError::InvalidParameter(_)
            | CosetError::SpaceMismatch { .. }
            | CosetError::OddModeCount(_) => EXIT_INVALID_INPUT,
            CosetError::DimensionCap { .. } | CosetError::TailBound { .. } => EXIT_RESOURCE_CAP,
            CosetError::NonConvergence { .. }
            | CosetError::ImaginaryResidual { .. }
            | CosetError::NegativeQuadraticForm(_) => EXIT_VERIFY_FAILURE,
        };
        Self { code, message: err.to_string() }
    }
}

impl From<CosetError> for CliError {
    fn from(err: CosetError) -> Self {
        CliError::invalid(err)
    }
}

#[derive(Parser)]
#[command(
    name = "thermal-coset",
    version,
    about = "Thermal coherent states: density operators, fidelity, Wigner functions",
    after_help = "The environment variable THERMAL_COSET_MAX_DIM overrides the Fock-space \
                  dimension hard cap (default 10000000)."
)]
enum Cli {
    /// Compute a thermal density operator and write it as JSON or CSV
    Rho(cmd_rho::RhoArgs),
    /// Scan thermal fidelity over a range of x and write a CSV table
    Fidelity(cmd_fidelity::FidelityArgs),
    /// Evaluate the thermal Wigner function on a phase-space grid
    Wigner(cmd_wigner::WignerArgs),
    /// Run the self-verification suites and report findings
    Verify(cmd_verify::VerifyArgs),
}

fn apply_env_cap() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("THERMAL_COSET_MAX_DIM") {
        let cap: usize = raw
            .parse()
            .map_err(|e| CliError::usage(format!("bad THERMAL_COSET_MAX_DIM {raw:?}: {e}")))?;
        thermal_coset::fock::set_default_max_dim(cap);
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = apply_env_cap().and_then(|()| match cli {
        Cli::Rho(args) => cmd_rho::run(args),
        Cli::Fidelity(args) => cmd_fidelity::run(args),
        Cli::Wigner(args) => cmd_wigner::run(args),
        Cli::Verify(args) => cmd_verify::run(args),
    });
    if let Err(e) = result {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}
