use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {message}")]
    Config { invariant: String, message: String },
    #[error("{0}")]
    Physics(#[from] catworld::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("plot error: {0}")]
    Plot(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Physics(_) => 3,
            CliError::Io(_) | CliError::Plot(_) => 1,
        }
    }

    /// Name of the violated invariant, printed on stderr.
    pub fn invariant(&self) -> &str {
        match self {
            CliError::Config { invariant, .. } => invariant,
            CliError::Physics(e) => e.invariant(),
            CliError::Io(_) => "io",
            CliError::Plot(_) => "plot",
        }
    }
}
