use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by every module of the crate.
///
/// Variants map onto two classes (see [`Error::class`]): problems with the
/// caller's input, and violations of internal invariants that should not occur
/// for valid input.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid mesh: {0}")]
    Mesh(String),
    #[error("unsupported topology: {0}")]
    Topology(String),
    #[error("index out of range: {what} needs index {index} but only {available} values are available")]
    Index {
        what: String,
        index: usize,
        available: usize,
    },
    #[error("problem too large: {0}")]
    Size(String),
    #[error("invalid input matrix: {0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent configuration: {0}")]
    Configuration(String),
    #[error("assembly failed: {0}")]
    Assembly(String),
    #[error("interior stiffness block is singular: {0}")]
    SingularInterior(String),
    #[error("witness construction failed: {0}")]
    Construction(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad parameters, indices, files or shapes supplied by the caller.
    Usage,
    /// Something that valid input should never trigger.
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Assembly(_)
            | Error::SingularInterior(_)
            | Error::Construction(_)
            | Error::Internal(_) => ErrorClass::Internal,
            _ => ErrorClass::Usage,
        }
    }

    pub(crate) fn index(what: impl Into<String>, index: usize, available: usize) -> Self {
        Error::Index {
            what: what.into(),
            index,
            available,
        }
    }
}
