use thiserror::Error;

/// Errors raised while building or analysing lightlike frames.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("vectors are linearly dependent (euclidean rank {rank} < {expected})")]
    LinearlyDependent { rank: usize, expected: usize },

    #[error("metric restricted to the span is degenerate (smallest normalized gram eigenvalue {eigenvalue:e})")]
    DegenerateSpan { eigenvalue: f64 },

    #[error("invalid hypersurface: {0}")]
    InvalidHypersurface(String),

    #[error("point is not on the hypersurface (|F(p) - c| = {residual:e})")]
    NotOnHypersurface { residual: f64 },

    #[error("gradient vanishes at the point (euclidean norm {norm:e})")]
    ZeroGradient { norm: f64 },

    #[error("hypersurface is not lightlike at the point (relative nullity {nullity:e})")]
    NotLightlike { nullity: f64 },

    #[error("screen policy failed: {0}")]
    PolicyFailure(String),

    #[error(
        "screen distribution is degenerate (smallest normalized gram eigenvalue {eigenvalue:e})"
    )]
    DegenerateScreen { eigenvalue: f64 },

    #[error("frame violates its constraints: {0}")]
    FrameInvalid(String),

    #[error("decomposition of the structure vector is inconsistent: {0}")]
    Inconsistent(String),

    #[error("structure vector is tangent to the hypersurface (b = {b:e}); the induced split is undefined")]
    ZetaTangent { b: f64 },

    #[error("proper inascreen hypersurface in ambient dimension {dim} (< 5)")]
    DimensionTooSmall { dim: usize },

    #[error("frame pivots change along probe direction {direction}; frame field is not differentiable here")]
    PivotInstability { direction: usize },

    #[error("field evaluation failed at a probe point: {0}")]
    EvaluationFailure(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
