//! Argument resolution shared by the subcommands: complex parsing, the
//! thermal specification, representation labels, and cutoff selection.

use num_complex::Complex64;
use serde::Serialize;
use thermal_coset::liealg::{Su11Params, Su2Params};
use thermal_coset::tfd::{ThermalContext, HBAR, K_BOLTZMANN};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Su2,
    Su11,
    Hw,
}

impl std::fmt::Display for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algebra::Su2 => write!(f, "su2"),
            Algebra::Su11 => write!(f, "su11"),
            Algebra::Hw => write!(f, "hw"),
        }
    }
}

/// Parse a complex number given as "re" or "re,im".
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => re
            .trim()
            .parse::<f64>()
            .map(|r| Complex64::new(r, 0.0))
            .map_err(|e| format!("bad real part {re:?}: {e}")),
        [re, im] => {
            let r = re.trim().parse::<f64>().map_err(|e| format!("bad real part {re:?}: {e}"))?;
            let i = im.trim().parse::<f64>().map_err(|e| format!("bad imag part {im:?}: {e}"))?;
            Ok(Complex64::new(r, i))
        }
        _ => Err(format!("expected \"re\" or \"re,im\", got {s:?}")),
    }
}

/// Shared thermal flags: exactly one of x or (omega_hz, temp_k).
#[derive(Debug, clap::Args)]
pub struct ThermalArgs {
    /// Dimensionless thermal parameter x = beta hbar omega
    #[arg(long, conflicts_with_all = ["omega_hz", "temp_k"])]
    pub x: Option<f64>,

    /// Angular frequency in rad/s (with --temp-k)
    #[arg(long, requires = "temp_k")]
    pub omega_hz: Option<f64>,

    /// Temperature in kelvin (with --omega-hz)
    #[arg(long, requires = "omega_hz")]
    pub temp_k: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThermalSpec {
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temp_k: Option<f64>,
}

impl ThermalArgs {
    pub fn resolve(&self) -> Result<(ThermalContext, ThermalSpec), CliError> {
        match (self.x, self.omega_hz, self.temp_k) {
            (Some(x), None, None) => {
                let ctx = ThermalContext::from_x(x).map_err(CliError::invalid)?;
                Ok((ctx, ThermalSpec { x, omega_hz: None, temp_k: None }))
            }
            (None, Some(w), Some(t)) => {
                let ctx = ThermalContext::from_physical(w, t).map_err(CliError::invalid)?;
                Ok((ctx, ThermalSpec { x: ctx.x(), omega_hz: Some(w), temp_k: Some(t) }))
            }
            _ => Err(CliError::usage(
                "specify exactly one thermal form: --x, or --omega-hz with --temp-k",
            )),
        }
    }

    /// Temperature equivalent of a dimensionless x, when omega is known.
    pub fn temp_for_x(&self, x: f64) -> Option<f64> {
        self.omega_hz.map(|w| HBAR * w / (K_BOLTZMANN * x))
    }
}

/// Representation label flags.
#[derive(Debug, clap::Args)]
pub struct StateArgs {
    /// su(2) spin j (integer or half-integer)
    #[arg(long)]
    pub j: Option<f64>,

    /// su(1,1) label q (Bargmann index k = (1+q)/2)
    #[arg(long)]
    pub q: Option<u32>,

    /// Coset label z for su(2), as "re" or "re,im"
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Option<Complex64>,

    /// Coset label zeta for su(1,1) (|zeta| < 1), as "re" or "re,im"
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub zeta: Option<Complex64>,

    /// Glauber label alpha for hw, as "re" or "re,im"
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Option<Complex64>,
}

pub enum ResolvedState {
    Su2(Su2Params),
    Su11(Su11Params),
    Hw(Complex64),
}

impl StateArgs {
    pub fn resolve(&self, algebra: Algebra) -> Result<ResolvedState, CliError> {
        match algebra {
            Algebra::Su2 => {
                let j = self.j.ok_or_else(|| CliError::usage("--algebra su2 requires --j"))?;
                let twice = (2.0 * j).round();
                if (2.0 * j - twice).abs() > 1e-9 || twice < 1.0 {
                    return Err(CliError::usage("j must be a positive integer or half-integer"));
                }
                let z = self.z.ok_or_else(|| CliError::usage("--algebra su2 requires --z"))?;
                if self.q.is_some() || self.zeta.is_some() || self.alpha.is_some() {
                    return Err(CliError::usage("su2 takes only --j and --z as state labels"));
                }
                Ok(ResolvedState::Su2(
                    Su2Params::new(twice as u32, z).map_err(CliError::invalid)?,
                ))
            }
            Algebra::Su11 => {
                let q = self.q.ok_or_else(|| CliError::usage("--algebra su11 requires --q"))?;
                let zeta =
                    self.zeta.ok_or_else(|| CliError::usage("--algebra su11 requires --zeta"))?;
                if self.j.is_some() || self.z.is_some() || self.alpha.is_some() {
                    return Err(CliError::usage("su11 takes only --q and --zeta as state labels"));
                }
                if zeta.norm() >= 1.0 {
                    return Err(CliError::usage("zeta must satisfy |zeta| < 1"));
                }
                Ok(ResolvedState::Su11(
                    Su11Params::new(q, zeta).map_err(CliError::invalid)?,
                ))
            }
            Algebra::Hw => {
                let alpha =
                    self.alpha.ok_or_else(|| CliError::usage("--algebra hw requires --alpha"))?;
                if self.j.is_some() || self.q.is_some() || self.z.is_some() || self.zeta.is_some() {
                    return Err(CliError::usage("hw takes only --alpha as a state label"));
                }
                Ok(ResolvedState::Hw(alpha))
            }
        }
    }
}

/// "auto" or an explicit nonnegative integer.
#[derive(Debug, Clone)]
pub enum CutoffArg {
    Auto,
    Explicit(usize),
}

pub fn parse_cutoff(s: &str) -> Result<CutoffArg, String> {
    if s.eq_ignore_ascii_case("auto") {
        Ok(CutoffArg::Auto)
    } else {
        s.parse::<usize>()
            .map(CutoffArg::Explicit)
            .map_err(|e| format!("cutoff must be \"auto\" or an integer: {e}"))
    }
}

/// Serializable echo of a complex number.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexEcho {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexEcho {
    fn from(v: Complex64) -> Self {
        Self { re: v.re, im: v.im }
    }
}
