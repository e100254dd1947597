use std::fmt;

use crate::energy::RealityWindow;
use crate::model::CaseId;

/// Which closed-form constraint between the family constants failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// μ⁴(4σΔ − ϑ²) = 4ξ²σ² (exponential family).
    Exponential,
    /// Γ²μ = (k+2)²(σΔμ − ξ²σ²/μ³) (rational family).
    Rational,
    /// μ⁴(4σΔ − Γ²) = 4ξ²σ² (rational family at k = −2).
    RationalCritical,
    /// 4σΔ − ϑ² > 0, required for a real μ.
    ExponentialDiscriminant,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Constraint::Exponential => "mu^4 (4 sigma Delta - vartheta^2) = 4 xi^2 sigma^2",
            Constraint::Rational => "Gamma^2 mu = (k+2)^2 (sigma Delta mu - xi^2 sigma^2 / mu^3)",
            Constraint::RationalCritical => "mu^4 (4 sigma Delta - Gamma^2) = 4 xi^2 sigma^2",
            Constraint::ExponentialDiscriminant => "4 sigma Delta - vartheta^2 > 0",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("constraint violated: {constraint} (relative mismatch {relative:e})")]
    ConstraintViolated { constraint: Constraint, relative: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("damping factor f({t}) = {value} is not positive")]
    NonPositiveDamping { t: f64, value: f64 },

    #[error("singular denominator in {what} at t = {t}")]
    SingularDenominator { what: &'static str, t: f64 },

    #[error("profile argument Gamma t + chi = {value} outside the domain at t = {t}")]
    ProfileDomain { t: f64, value: f64 },

    #[error("integration blew up after t = {t_last}: {reason}")]
    BlowUp { t_last: f64, reason: String },

    #[error("EP residual {residual:e} at t = {t} exceeds tolerance {tolerance:e}")]
    ResidualNotCertified { t: f64, residual: f64, tolerance: f64 },

    #[error("negative radicand in {which} at t = {t}: {value:e}")]
    NegativeRadicand { which: &'static str, t: f64, value: f64 },

    #[error("degenerate quadratic for {which} at t = {t}: no theta/Omega dependence")]
    DegenerateQuadratic { which: &'static str, t: f64 },

    #[error("operation not applicable to case {0}")]
    NotApplicableCase(CaseId),

    #[error("integrand singular at t = {t}")]
    IntegrandSingular { t: f64 },

    #[error("quadrature did not converge: estimate {estimate:e}, refined {refined:e}")]
    QuadratureNotConverged { estimate: f64, refined: f64 },

    #[error("no closed-form phase for case {0}; use quadrature")]
    OutOfCatalog(CaseId),

    #[error("closed form left the real domain in {term} (imaginary residue {imag:e})")]
    DomainError { term: &'static str, imag: f64 },

    #[error("normalisation requires rho^2 > 0, got {0}")]
    NegativeNormalization(f64),

    #[error("all sampled points were too close to a zero of phi ({skipped} skipped)")]
    NodeTooCloseToZeroOfPhi { skipped: usize },

    #[error("t = {t} lies outside the reality window {window}")]
    OutsideRealityWindow { t: f64, window: RealityWindow },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
