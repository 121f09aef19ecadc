//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the solver pipeline.
///
/// Diagnostic payloads are carried as `f64` regardless of the working
/// scalar type so the variants stay object-safe and printable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("degenerate model: l0 = l1 = 0 gives K2 = 0 (classical beam limit, zeta = 0)")]
    DegenerateModel,

    #[error("mismatched grid lengths: expected {expected}, got {got}")]
    MismatchedGrids { expected: usize, got: usize },

    #[error("root representative pairing failed: residual {residual:e} exceeds tolerance {tol:e}")]
    RepresentativePairing { residual: f64, tol: f64 },

    #[error(
        "asymptotic root radicand 27 zeta^2 lambda^2 - 2 is not positive at lambda = {lambda}"
    )]
    RadicandNegative { lambda: f64 },

    #[error("degenerate fundamental set at lambda = {lambda}: characteristic roots coincide")]
    DegenerateRoots { lambda: f64 },

    #[error("determinant phase tracking failed at lambda = {lambda}: real residue {residue:e}")]
    PhaseTracking { lambda: f64, residue: f64 },

    #[error("eigenvalue count mismatch in slot {slot}: expected 1 sign change, found {found}")]
    MissedRoot { slot: usize, found: usize },

    #[error("determinant lost all significant digits; max usable mode count is {max_usable}")]
    PrecisionExhausted { max_usable: usize },

    #[error("eigenvalue #{n} is not numerically simple: sigma5/sigma6 = {sv_ratio:e}")]
    NonSimpleEigenvalue { n: usize, sv_ratio: f64 },

    #[error("imaginary residue {magnitude:e} exceeds tolerance {tol:e} in mode evaluation")]
    ImaginaryResidue { magnitude: f64, tol: f64 },

    #[error("mode has numerically zero L2 norm")]
    ZeroNorm,

    #[error("boundary-condition system is ill-conditioned: estimate {cond:e}")]
    IllConditioned { cond: f64 },

    #[error("mode index {index} out of range (basis holds {len} modes)")]
    IndexOutOfRange { index: i64, len: usize },

    #[error("insufficient modes: need {needed}, basis holds {got}")]
    InsufficientModes { needed: usize, got: usize },

    #[error("initial state not resolved: truncation residual {residual:e} exceeds {tol:e}")]
    TruncationResidual { residual: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
