//! `fidelity`: scan the thermal fidelity over a range of x and write the
//! closed-form/series value next to the numeric quadratic form.

use std::path::PathBuf;

use serde::Serialize;
use thermal_coset::measures::{
    fidelity_su11_numeric, fidelity_su11_series, fidelity_su2_closed, fidelity_su2_numeric,
};
use thermal_coset::tfd::ThermalContext;

use crate::config::{
    parse_cutoff, Algebra, ComplexEcho, CutoffArg, ResolvedState, StateArgs, ThermalArgs,
};
use crate::output::{fmt_f64, CsvWriter};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanScale {
    Linear,
    Log,
}

#[derive(Debug, clap::Args)]
pub struct FidelityArgs {
    #[arg(long, value_enum)]
    pub algebra: Algebra,

    #[command(flatten)]
    pub state: StateArgs,

    /// Scan start in x
    #[arg(long)]
    pub x_min: f64,

    /// Scan end in x
    #[arg(long)]
    pub x_max: f64,

    /// Number of scan points
    #[arg(long, default_value_t = 50)]
    pub steps: usize,

    #[arg(long, value_enum, default_value_t = ScanScale::Log)]
    pub scale: ScanScale,

    /// Angular frequency in rad/s; adds a temperature column
    #[arg(long)]
    pub omega_hz: Option<f64>,

    /// Cutoff for the numeric route, or "auto"
    #[arg(long, default_value = "auto", value_parser = parse_cutoff)]
    pub cutoff: CutoffArg,

    /// Certified remainder demanded of the su(1,1) series
    #[arg(long, default_value_t = 1e-10)]
    pub series_tol: f64,

    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Serialize)]
struct FidelityConfig {
    algebra: Algebra,
    #[serde(skip_serializing_if = "Option::is_none")]
    twice_j: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u32>,
    label: ComplexEcho,
    x_min: f64,
    x_max: f64,
    steps: usize,
    scale: ScanScale,
    cutoff: usize,
    series_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega_hz: Option<f64>,
}

pub fn run(args: FidelityArgs) -> Result<(), CliError> {
    if !(args.x_min > 0.0) || !(args.x_max > args.x_min) {
        return Err(CliError::usage("need 0 < x_min < x_max"));
    }
    if args.steps < 2 {
        return Err(CliError::usage("need at least 2 scan steps"));
    }
    let state = args.state.resolve(args.algebra)?;

    let (config, closed_col) = match &state {
        ResolvedState::Su2(p) => {
            let cutoff = match args.cutoff {
                CutoffArg::Explicit(n) => n,
                // the quadratic form touches only the spin-j block, which
                // is exact at any cutoff >= 2j; headroom just exercises
                // more of the assembled matrix
                CutoffArg::Auto => p.twice_j as usize + 24,
            };
            (
                FidelityConfig {
                    algebra: args.algebra,
                    twice_j: Some(p.twice_j),
                    q: None,
                    label: p.z.into(),
                    x_min: args.x_min,
                    x_max: args.x_max,
                    steps: args.steps,
                    scale: args.scale,
                    cutoff,
                    series_tol: args.series_tol,
                    omega_hz: args.omega_hz,
                },
                "F_closed",
            )
        }
        ResolvedState::Su11(p) => {
            let cutoff = match args.cutoff {
                CutoffArg::Explicit(n) => n,
                CutoffArg::Auto => {
                    let r = p.zeta.norm();
                    let label_spread = if r > 0.0 {
                        ((-27.6 / r.ln()).ceil() as usize).min(200)
                    } else {
                        0
                    };
                    p.q as usize + label_spread + 10
                }
            };
            (
                FidelityConfig {
                    algebra: args.algebra,
                    twice_j: None,
                    q: Some(p.q),
                    label: p.zeta.into(),
                    x_min: args.x_min,
                    x_max: args.x_max,
                    steps: args.steps,
                    scale: args.scale,
                    cutoff,
                    series_tol: args.series_tol,
                    omega_hz: args.omega_hz,
                },
                "F_series",
            )
        }
        ResolvedState::Hw(_) => {
            return Err(CliError::usage(
                "fidelity is defined for --algebra su2 and su11",
            ));
        }
    };

    let mut csv = CsvWriter::new();
    csv.meta("command", "fidelity");
    csv.meta("library_version", env!("CARGO_PKG_VERSION"));
    csv.meta(
        "config",
        serde_json::to_string(&config).map_err(|e| CliError::usage(e.to_string()))?,
    );
    let mut cols = vec!["x"];
    if args.omega_hz.is_some() {
        cols.push("T_equivalent_K");
    }
    cols.extend_from_slice(&[closed_col, "F_numeric", "abs_delta", "status"]);
    csv.header(&cols);

    let thermal_helper = ThermalArgs { x: None, omega_hz: args.omega_hz, temp_k: None };
    for i in 0..args.steps {
        let frac = i as f64 / (args.steps - 1) as f64;
        let x = match args.scale {
            ScanScale::Linear => args.x_min + (args.x_max - args.x_min) * frac,
            ScanScale::Log => args.x_min * (args.x_max / args.x_min).powf(frac),
        };
        let ctx = ThermalContext::from_x(x)?;
        let mut fields = vec![fmt_f64(x)];
        if args.omega_hz.is_some() {
            fields.push(fmt_f64(thermal_helper.temp_for_x(x).unwrap()));
        }
        match &state {
            ResolvedState::Su2(p) => {
                let closed = fidelity_su2_closed(p.twice_j, &ctx);
                let numeric = fidelity_su2_numeric(p, &ctx, config.cutoff)?;
                fields.push(fmt_f64(closed));
                fields.push(fmt_f64(numeric));
                fields.push(fmt_f64((closed - numeric).abs()));
                fields.push("ok".into());
            }
            ResolvedState::Su11(p) => {
                // a failed series row is flagged and the scan continues
                match fidelity_su11_series(p, &ctx, args.series_tol) {
                    Ok(series) => {
                        let numeric = fidelity_su11_numeric(p, &ctx, config.cutoff)?;
                        fields.push(fmt_f64(series.value));
                        fields.push(fmt_f64(numeric));
                        fields.push(fmt_f64((series.value - numeric).abs()));
                        fields.push("ok".into());
                    }
                    Err(e) => {
                        let numeric = fidelity_su11_numeric(p, &ctx, config.cutoff)?;
                        fields.push("nan".into());
                        fields.push(fmt_f64(numeric));
                        fields.push("nan".into());
                        fields.push(format!("series_error({e})").replace(',', ";"));
                    }
                }
            }
            ResolvedState::Hw(_) => unreachable!(),
        }
        csv.row(&fields);
    }
    csv.write_to(&args.output)?;
    eprintln!(
        "fidelity: {} points over x in [{}, {}] -> {}",
        args.steps,
        args.x_min,
        args.x_max,
        args.output.display()
    );
    Ok(())
}
