//! `verify`: run the library's invariant suites, print one line per
//! check, list the printed-form-vs-oracle findings, and exit nonzero when
//! any certified check fails.

use std::path::PathBuf;

use thermal_coset::verify::{run as run_suite, VerifyLevel};

use crate::output::write_json;
use crate::{CliError, EXIT_VERIFY_FAILURE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
    pub level: LevelArg,

    /// Also write the full report as JSON
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub fn run(args: VerifyArgs) -> Result<(), CliError> {
    let level = match args.level {
        LevelArg::Quick => VerifyLevel::Quick,
        LevelArg::Full => VerifyLevel::Full,
    };
    let start = std::time::Instant::now();
    let report = run_suite(level)?;
    let elapsed = start.elapsed().as_secs_f64();

    for chk in &report.checks {
        let status = if chk.passed { "PASS" } else { "FAIL" };
        println!(
            "[{status}] {:<44} observed {:>12.4e}  threshold {:>9.1e}  {}",
            chk.name, chk.observed, chk.threshold, chk.detail
        );
    }
    println!();
    println!("findings (printed-form vs oracle resolutions, not failures):");
    for f in &report.findings {
        println!("  - {}: {}", f.topic, f.summary);
    }
    println!();
    let n_fail = report.checks.iter().filter(|c| !c.passed).count();
    println!(
        "verify {:?}: {} checks, {} failed, {} findings",
        level,
        report.checks.len(),
        n_fail,
        report.findings.len()
    );
    eprintln!("verify wall time: {elapsed:.1} s");

    if let Some(path) = &args.json {
        write_json(path, &report)?;
    }
    if !report.all_passed {
        return Err(CliError {
            code: EXIT_VERIFY_FAILURE,
            message: format!("{n_fail} verification check(s) failed"),
        });
    }
    Ok(())
}
