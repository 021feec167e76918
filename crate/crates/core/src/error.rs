use thiserror::Error;

/// Errors surfaced by the exact engine.
///
/// Identity violations are special: they mean an algebraic identity that must
/// hold exactly failed to hold, i.e. an implementation bug rather than bad
/// input.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree {degree} out of range for dimension {n}")]
    DegreeOutOfRange { degree: usize, n: usize },

    #[error("frame index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("homogeneity mismatch: numerator mixes xi-degrees {found} and {other}")]
    HomogeneityMismatch { found: i64, other: i64 },

    #[error("unbounded symbol: xi_n-degree {degree} exceeds denominator degree {max}")]
    UnboundedSymbol { degree: usize, max: usize },

    #[error("divergent line integral: {0}")]
    DivergentIntegral(String),

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("residual imaginary part in {0}")]
    ResidualImaginary(String),

    #[error("unsupported jet: {0}")]
    UnsupportedJet(String),

    #[error("stray variable {var} in {context}")]
    StrayVariable { var: String, context: String },
}

pub type Result<T> = std::result::Result<T, CoreError>;
