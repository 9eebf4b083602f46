//! Central tolerance constants.
//!
//! Every threshold used by the invariant suites is named here rather than
//! scattered as magic numbers. Values reflect double precision plus the
//! truncation analysis done per computation; certified tail bounds are
//! always computed at run time and reported next to results.

/// Hermiticity: max entrywise |rho - rho^dagger|.
pub const TOL_HERM: f64 = 1e-12;

/// Positive semidefiniteness slack on the smallest eigenvalue.
pub const TOL_PSD: f64 = 1e-9;

/// Default relative termination tolerance for exponential application.
pub const TOL_EXP: f64 = 1e-13;

/// Norm preservation under anti-Hermitian exponentials.
pub const TOL_UNITARY: f64 = 1e-10;

/// Partial trace: |tr rho - |psi|^2|.
pub const TOL_PTRACE: f64 = 1e-12;

/// Bogoliubov coefficient identity u^2 - v^2 = 1.
pub const TOL_BOGOLIUBOV: f64 = 1e-12;

/// Agreement between the analytic and the exponentiated thermal vacuum.
pub const TOL_THERMAL_VACUUM: f64 = 1e-9;

/// Entrywise oracle equivalence: closed-form rho vs reduced doubled-space state.
pub const TOL_ORACLE: f64 = 1e-8;

/// T -> 0 reduction to the pure projector (evaluated at x >= 40).
pub const TOL_ZERO_T: f64 = 1e-8;

/// Overlap formulas vs doubled-space inner products.
pub const TOL_OVERLAP: f64 = 1e-9;

/// Over-completeness quadrature residual.
pub const TOL_RESOLUTION: f64 = 1e-10;

/// Laguerre recurrence vs series oracle.
pub const TOL_LAGUERRE: f64 = 1e-12;

/// Closed-form vs numeric Wigner, relative.
pub const TOL_WIGNER_REL: f64 = 1e-6;

/// Absolute floor under which Wigner values are not compared relatively.
pub const TOL_WIGNER_ABS: f64 = 1e-12;

/// Imaginary residual allowed in the closed-form Wigner sum.
pub const TOL_WIGNER_IM: f64 = 1e-10;

/// su(2) closed-form fidelity vs numeric quadratic form.
pub const TOL_FIDELITY_SU2: f64 = 1e-7;

/// su(1,1) fidelity series vs numeric quadratic form.
pub const TOL_FIDELITY_SU11: f64 = 1e-6;

/// Default hard cap on Fock-space dimension.
pub const DEFAULT_MAX_DIM: usize = 10_000_000;
