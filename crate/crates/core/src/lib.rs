//! Thermal coherent states of the Heisenberg-Weyl, su(2) and su(1,1) Lie
//! algebras in the thermofield-dynamics formalism.
//!
//! The library constructs the states on a doubled, truncated Fock space,
//! assembles their closed-form density operators, and computes thermal
//! quantum fidelity and thermal Wigner functions. Every closed-form result
//! is cross-validated against an independent brute-force route (Bogoliubov
//! transformation plus partial trace over the tilde modes), and every
//! truncated quantity is reported together with a certified tail bound.
//!
//! Module map:
//! - [`fock`]: truncated Fock spaces, states, sparse operators, exponential
//!   application, partial trace.
//! - [`liealg`]: su(2)/su(1,1) generator representations, Casimirs, pure
//!   coherent states, displacement-parameter maps.
//! - [`tfd`]: thermal context, Bogoliubov transformation, thermal vacuum,
//!   and the doubled-space oracle constructions.
//! - [`states`]: closed-form thermal density operators, overlap formulas,
//!   over-completeness quadrature.
//! - [`measures`]: thermal fidelity (closed form, series, numeric) and
//!   thermal Wigner functions (closed form plus numerical transform).
//! - [`verify`]: the self-verification suites behind the CLI.

pub mod error;
pub mod fock;
pub mod liealg;
pub mod measures;
pub mod quadrature;
pub mod states;
pub mod tfd;
pub mod tol;
pub mod verify;

mod math;
mod tail;

pub use error::{CosetError, Result};
pub use fock::{
    apply_exponential, inner, ladder, partial_trace_tilde, DensityOperator, FockSpace,
    LadderKind, Operator, PureState,
};
pub use tfd::ThermalContext;
