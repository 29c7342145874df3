use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperlogError {
    #[error("integration path passes within {0} of a singular point")]
    PathTooClose(f64),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
    #[error("residue mismatch for first integral {integral} at spectral value {spectral}")]
    ResidueMismatch { integral: usize, spectral: usize },
    #[error("symbolic identity leaves {0} nonzero tensor coefficients")]
    SymbolicIdentityViolation(usize),
    #[error("parameters are not generic: {0}")]
    NonGeneric(String),
    #[error("fiber does not split into the known factors: {0}")]
    Factorization(String),
    #[error("no admissible sample point found after {0} attempts")]
    SamplingFailure(usize),
    #[error(transparent)]
    Core(#[from] dp_hlog_core::Error),
}

pub type Result<T> = std::result::Result<T, HyperlogError>;
