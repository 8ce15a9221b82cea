use crate::hypergraph::Hypergraph;

/// Errors produced by the reconstruction toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}:{line}: parse error: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("model file error: {0}")]
    Model(String),

    /// The search hit its iteration cap with edges still unexplained and the
    /// exhaustion fallback disabled. Carries whatever was reconstructed so far.
    #[error("incomplete reconstruction: {remaining_weight} projection weight left after {iterations} iterations")]
    Incomplete {
        iterations: usize,
        remaining_weight: u64,
        partial: Box<Hypergraph>,
    },
}

impl Error {
    /// Process exit code for the CLI: 1 for validation-class errors, 2 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
