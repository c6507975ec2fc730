use thiserror::Error;

/// Failure modes shared by every module of the toolkit.
///
/// `invariant()` returns a short stable name for the violated constraint so
/// that front ends can report it without parsing the message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation requested outside the validity domain of an index law.
    #[error("{kind}: position {position} outside validity domain ({constraint}); singular radius at {singular_radius}")]
    Domain {
        kind: &'static str,
        position: f64,
        constraint: &'static str,
        singular_radius: f64,
    },
    /// Integration path reached f <= 0.
    #[error("horizon crossing: lapse f({radius}) = {lapse} <= 0 (static region is {lower}..{upper})")]
    Horizon {
        radius: f64,
        lapse: f64,
        lower: f64,
        upper: f64,
    },
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },
    #[error("integration failed: {0}")]
    Integration(String),
}

impl Error {
    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn invariant(&self) -> &str {
        match self {
            Error::Domain { constraint, .. } => constraint,
            Error::Horizon { .. } => "f>0",
            Error::Geometry(_) => "geometry",
            Error::Parameter { name, .. } => name,
            Error::Integration(_) => "integrator-tolerance",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
