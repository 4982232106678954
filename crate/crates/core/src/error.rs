use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty word")]
    EmptyWord,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("no matrix bound to variable `{0}`")]
    MissingVariable(String),
    #[error("matrix bound to symmetric variable `{0}` is not symmetric")]
    NotSymmetric(String),
    #[error("eigenvalue computation did not converge: {0}")]
    Convergence(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size guard exceeded: {what} has {size} vertices, limit is {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
