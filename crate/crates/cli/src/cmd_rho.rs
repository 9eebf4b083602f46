//! `rho`: assemble a thermal density operator and export it.
//!
//! JSON: row-major dense entries as [re, im] pairs with occupation-tuple
//! row labels, wrapped in the result envelope. CSV: sparse triplets
//! row_label,col_label,re,im with the configuration embedded as `#` lines.

use std::path::PathBuf;

use serde::Serialize;
use thermal_coset::fock::{default_max_dim, partial_trace_tilde, DensityOperator};
use thermal_coset::states::{
    rho_su11, rho_su2, suggest_cutoff_su11, suggest_cutoff_su2, CertifiedRho,
};
use thermal_coset::tfd::thermal_coherent_hw;

use crate::config::{
    parse_cutoff, Algebra, ComplexEcho, CutoffArg, ResolvedState, StateArgs, ThermalArgs,
    ThermalSpec,
};
use crate::output::{fmt_f64, write_json, CsvWriter};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
pub struct RhoArgs {
    /// Which algebra's thermal coherent state to build
    #[arg(long, value_enum)]
    pub algebra: Algebra,

    #[command(flatten)]
    pub state: StateArgs,

    #[command(flatten)]
    pub thermal: ThermalArgs,

    /// Per-mode occupation cutoff, or "auto" to derive from the tail bound
    #[arg(long, default_value = "auto", value_parser = parse_cutoff)]
    pub cutoff: CutoffArg,

    /// Certified bound demanded on |tr rho - 1|
    #[arg(long, default_value_t = 1e-8)]
    pub tail_tol: f64,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file path
    #[arg(long)]
    pub output: PathBuf,

    /// Record wall time in the envelope (off by default so identical
    /// configs produce byte-identical files)
    #[arg(long, default_value_t = false)]
    pub timings: bool,
}

#[derive(Serialize)]
struct RhoConfig {
    algebra: Algebra,
    #[serde(skip_serializing_if = "Option::is_none")]
    twice_j: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<ComplexEcho>,
    thermal: ThermalSpec,
    cutoff: usize,
    tail_tol: f64,
}

#[derive(Serialize)]
struct RhoEnvelope {
    command: &'static str,
    library_version: &'static str,
    config: RhoConfig,
    x: f64,
    dim: usize,
    trace_deficit_bound: f64,
    trace_re: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
    row_labels: Vec<Vec<usize>>,
    /// Row-major dense entries as [re, im].
    entries: Vec<[f64; 2]>,
}

pub fn run(args: RhoArgs) -> Result<(), CliError> {
    let start = std::time::Instant::now();
    let (ctx, spec) = args.thermal.resolve()?;
    let state = args.state.resolve(args.algebra)?;

    let (certified, config) = match &state {
        ResolvedState::Su2(p) => {
            let cutoff = match args.cutoff {
                CutoffArg::Explicit(n) => n,
                CutoffArg::Auto => {
                    // 1.5x safety factor on the certified suggestion
                    let base = suggest_cutoff_su2(p, &ctx, args.tail_tol);
                    (base * 3).div_ceil(2)
                }
            };
            let certified = rho_su2(p, &ctx, cutoff, args.tail_tol)?;
            let config = RhoConfig {
                algebra: args.algebra,
                twice_j: Some(p.twice_j),
                q: None,
                label: Some(p.z.into()),
                thermal: spec,
                cutoff,
                tail_tol: args.tail_tol,
            };
            (certified, config)
        }
        ResolvedState::Su11(p) => {
            let cutoff = match args.cutoff {
                CutoffArg::Explicit(n) => n,
                CutoffArg::Auto => {
                    let base = suggest_cutoff_su11(p, &ctx, args.tail_tol);
                    (base * 3).div_ceil(2)
                }
            };
            let certified = rho_su11(p, &ctx, cutoff, args.tail_tol)?;
            let config = RhoConfig {
                algebra: args.algebra,
                twice_j: None,
                q: Some(p.q),
                label: Some(p.zeta.into()),
                thermal: spec,
                cutoff,
                tail_tol: args.tail_tol,
            };
            (certified, config)
        }
        ResolvedState::Hw(alpha) => {
            // reduced state of the doubled-space thermal Glauber state;
            // tail certified through the vacuum-norm deficit
            let cutoff = match args.cutoff {
                CutoffArg::Explicit(n) => n,
                CutoffArg::Auto => {
                    let thermal_part = (-(args.tail_tol.min(1e-3)).ln() / ctx.x()).ceil();
                    let coherent_part = 2.0 * alpha.norm_sqr() + 8.0 * alpha.norm() + 8.0;
                    ((thermal_part + coherent_part) * 1.5) as usize
                }
            };
            let doubled = thermal_coherent_hw(*alpha, &ctx, cutoff)?;
            let rho = partial_trace_tilde(&doubled)?;
            let deficit = (1.0 - rho.trace().re).abs();
            if deficit >= args.tail_tol {
                return Err(CliError::invalid(
                    thermal_coset::error::CosetError::TailBound {
                        required: args.tail_tol,
                        achieved: deficit,
                        suggested_cutoff: cutoff * 2,
                    },
                ));
            }
            let config = RhoConfig {
                algebra: args.algebra,
                twice_j: None,
                q: None,
                label: Some((*alpha).into()),
                thermal: spec,
                cutoff,
                tail_tol: args.tail_tol,
            };
            (CertifiedRho { rho, trace_deficit: deficit }, config)
        }
    };

    let rho = &certified.rho;
    match args.format {
        Format::Json => {
            let dim = rho.dim();
            if dim.checked_mul(dim).is_none_or(|n| n > default_max_dim()) {
                return Err(CliError {
                    code: crate::EXIT_RESOURCE_CAP,
                    message: format!(
                        "dense JSON payload would hold {dim}^2 entries, above the cap \
                         {}; use --format csv or raise THERMAL_COSET_MAX_DIM",
                        default_max_dim()
                    ),
                });
            }
            let space = rho.space();
            let envelope = RhoEnvelope {
                command: "rho",
                library_version: env!("CARGO_PKG_VERSION"),
                config,
                x: ctx.x(),
                dim,
                trace_deficit_bound: certified.trace_deficit,
                trace_re: rho.trace().re,
                wall_time_s: args.timings.then(|| start.elapsed().as_secs_f64()),
                row_labels: (0..dim).map(|i| space.occupation(i)).collect(),
                entries: rho
                    .to_dense()
                    .into_iter()
                    .map(|v| [v.re, v.im])
                    .collect(),
            };
            write_json(&args.output, &envelope)?;
        }
        Format::Csv => {
            write_csv(&args.output, rho, &config, ctx.x(), certified.trace_deficit)?;
        }
    }
    eprintln!(
        "rho: dim {} with certified |tr-1| <= {:.3e} -> {}",
        rho.dim(),
        certified.trace_deficit,
        args.output.display()
    );
    Ok(())
}

fn write_csv(
    path: &std::path::Path,
    rho: &DensityOperator,
    config: &RhoConfig,
    x: f64,
    deficit: f64,
) -> Result<(), CliError> {
    let mut csv = CsvWriter::new();
    csv.meta("command", "rho");
    csv.meta("library_version", env!("CARGO_PKG_VERSION"));
    csv.meta(
        "config",
        serde_json::to_string(config).map_err(|e| CliError::usage(e.to_string()))?,
    );
    csv.meta("x", fmt_f64(x));
    csv.meta("trace_deficit_bound", fmt_f64(deficit));
    csv.header(&["row_label", "col_label", "re", "im"]);
    let space = rho.space();
    let label = |idx: usize| -> String {
        space
            .occupation(idx)
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(":")
    };
    for (r, c, v) in rho.iter() {
        csv.row(&[label(r), label(c), fmt_f64(v.re), fmt_f64(v.im)]);
    }
    csv.write_to(path)
}
