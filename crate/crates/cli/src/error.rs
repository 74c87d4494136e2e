use thiserror::Error;
use walker_ruled::GeometryError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("argument error: {0}")]
    Argument(String),

    #[error("{kind}: {source}", kind = .source.kind())]
    Geometry { source: GeometryError },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for usage, configuration and i/o problems, 1 for geometric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Argument(_) | CliError::Io(_) => 2,
            CliError::Geometry { .. } => 1,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(source: GeometryError) -> Self {
        CliError::Geometry { source }
    }
}
