use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is invalid; `field` names the offending entry.
    #[error("invalid configuration `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested problem exceeds a memory or exactness budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A numerical procedure failed (instability, embedding failure, precision).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Inputs were produced in a way the operation cannot use.
    #[error("protocol error: {0}")]
    Protocol(String),

    /// A precondition on sample sizes or shapes was not met.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An extracted geodesic reached the edge of the simulation box.
    #[error("geodesic touches the simulation box boundary (radius {radius}); enlarge box_margin")]
    BoundaryHit { radius: i64 },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
