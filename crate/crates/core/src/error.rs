use thiserror::Error;

/// Errors surfaced by the library.
///
/// Tail-bound and cap violations carry enough context for a caller to retry
/// with a larger cutoff or an explicit cap override.
#[derive(Debug, Error)]
pub enum CosetError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("space dimension {dim} exceeds the hard cap {cap} (override with a larger cap)")]
    DimensionCap { dim: usize, cap: usize },

    #[error("operands live on different Fock spaces ({left} vs {right} modes/cutoff)")]
    SpaceMismatch { left: String, right: String },

    #[error("partial trace requires an even mode count (physical + tilde), got {0}")]
    OddModeCount(usize),

    #[error(
        "truncation tail {achieved:.3e} exceeds the requested bound {required:.3e}; \
         suggested cutoff: {suggested_cutoff}"
    )]
    TailBound {
        required: f64,
        achieved: f64,
        suggested_cutoff: usize,
    },

    #[error("series/exponential failed to converge within {max_terms} terms (residual {residual:.3e})")]
    NonConvergence { max_terms: usize, residual: f64 },

    #[error("closed-form Wigner sum left an imaginary residual {residual:.3e} above {threshold:.3e}")]
    ImaginaryResidual { residual: f64, threshold: f64 },

    #[error("quadratic form returned {0:.3e} < 0 beyond numerical noise; density operator is broken")]
    NegativeQuadraticForm(f64),
}

pub type Result<T> = std::result::Result<T, CosetError>;
