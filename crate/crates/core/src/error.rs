use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric parameter is outside its valid range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Lengths or shapes do not agree (topology vs. synapses, genome vs. topology, ...).
    #[error("structural mismatch: {0}")]
    Structural(String),

    /// A value is not a member of the active codebook.
    #[error("not a codebook value: {0}")]
    Domain(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("search space of {bits} bits exceeds the {limit}-bit guard")]
    SearchTooLarge { bits: usize, limit: usize },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
