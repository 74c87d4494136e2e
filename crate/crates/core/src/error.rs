use thiserror::Error;

/// Errors produced while parsing expressions or evaluating geometry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },

    #[error("evaluation domain error: {0}")]
    EvaluationDomain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degenerate normal: |g(n,n)| = {radicand:e} is within the null tolerance")]
    DegenerateNormal { radicand: f64 },

    #[error("tangent partials are linearly dependent")]
    RankDeficient,

    #[error("degenerate first fundamental form: det = {det:e}")]
    DegenerateMetric { det: f64 },

    #[error("degenerate denominator in closed-form Laplace-Beltrami: {value:e}")]
    DegenerateDenominator { value: f64 },

    #[error("director constraint violated at t = {t}: g(X,X) = {value} but the target is {target}")]
    DirectorConstraintViolated { t: f64, value: f64, target: f64 },

    #[error("directors are not orthogonal: |e| = {e:e}")]
    OrthogonalityViolated { e: f64 },
}

impl GeometryError {
    /// Short stable name used in tabular output.
    pub fn kind(&self) -> &'static str {
        match self {
            GeometryError::Syntax { .. } => "Syntax",
            GeometryError::UnknownIdentifier { .. } => "UnknownIdentifier",
            GeometryError::EvaluationDomain(_) => "EvaluationDomain",
            GeometryError::Argument(_) => "Argument",
            GeometryError::DegenerateNormal { .. } => "DegenerateNormal",
            GeometryError::RankDeficient => "RankDeficient",
            GeometryError::DegenerateMetric { .. } => "DegenerateMetric",
            GeometryError::DegenerateDenominator { .. } => "DegenerateDenominator",
            GeometryError::DirectorConstraintViolated { .. } => "DirectorConstraintViolated",
            GeometryError::OrthogonalityViolated { .. } => "OrthogonalityViolated",
        }
    }
}

pub type Result<T> = std::result::Result<T, GeometryError>;
