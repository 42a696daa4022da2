//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HardyError {
    /// Operation requires a radial field (profile or polynomial cutoff).
    #[error("field is not radial: {0}")]
    NonRadialField(String),

    /// A field integral does not converge to the requested tolerance.
    #[error("field integral did not converge: {0}")]
    NonIntegrableField(String),

    /// Field construction violated an invariant.
    #[error("invalid field: {0}")]
    InvalidField(String),

    /// Superpotential tail asymptotics could not bound k/K within tolerance.
    #[error("superpotential tail unresolved: {0}")]
    TailUnresolved(String),

    /// Radial closed form needs a sign-definite field.
    #[error("radial beta requires a nonnegative field")]
    NegativeFieldUnsupported,

    /// Spin component incompatible with the sign of the flux.
    #[error("invalid spin for flux sign: {0}")]
    InvalidSpinSign(String),

    /// The flux is zero, so no nontrivial bound exists.
    #[error("zero flux: no nontrivial Hardy bound")]
    ZeroFlux,

    /// Angular-mode case tag inconsistent with (m, alpha).
    #[error("case mismatch: {0}")]
    CaseMismatch(String),

    /// The Muckenhoupt product grows without bound.
    #[error("divergent Muckenhoupt product: {0}")]
    DivergentProduct(String),

    /// A form weight vanishes on a set of positive length.
    #[error("singular weight: {0}")]
    SingularWeight(String),

    /// Eigenvalue iteration hit its cap without meeting the residual target.
    #[error("eigen iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// Test-sequence support overlaps the field support.
    #[error("test sequence support overlaps the field: {0}")]
    SupportOverlap(String),

    /// Configuration file or CLI input problem.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HardyError>;
