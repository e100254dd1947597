//! Two-dimensional damped charged oscillator in a time-dependent magnetic
//! field on a phase space whose position and momentum noncommutativity
//! parameters depend on time.
//!
//! The crate builds the Hamiltonian coefficients from a Bopp shift, solves
//! for the noncommutativity parameters along analytic Ermakov-Pinney
//! solutions, and evaluates eigenfunctions, phases and energy expectations,
//! each alongside an independent numerical route.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod energy;
pub mod ep;
pub mod error;
pub mod model;
pub mod nc;
pub mod phase;
pub mod quadrature;
pub mod validate;
pub mod wavefunction;
pub mod xprec;

pub use error::{Constraint, Error, Result};
pub use model::{catalog, CaseId, Family, Scenario, ScenarioConfig, ScenarioParams};

/// Crate version, stamped into generated artifacts.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
