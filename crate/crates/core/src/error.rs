use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Format { path: String, line: usize, message: String },

    #[error("invalid lexicon: {0}")]
    Lexicon(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{path}: input is not valid UTF-8")]
    Decode { path: String },

    #[error("length mismatch: {what} has {left} items but {right} were expected")]
    LengthMismatch { what: String, left: usize, right: usize },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("corpus too small: {size} pairs, at least {min} required")]
    TooSmall { size: usize, min: usize },

    #[error("triple `{0}` has not been labeled")]
    Unlabeled(String),

    #[error("verb chain at tokens {0:?} has no finite anchor, modal or future auxiliary")]
    UnanchoredChain(Vec<usize>),

    #[error("invalid split ratios: {0}")]
    InvalidRatio(String),

    #[error("unknown tense category `{0}` (expected one of Past, Present, Future, PasPerfect, PrePerfect, FutPerfect, Modal)")]
    UnknownCategory(String),

    #[error("unknown French tense `{name}` (expected one of {valid})")]
    UnknownFrenchTense { name: String, valid: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for violations of a calling contract (alignment, names, config),
    /// as opposed to I/O and file-format failures.
    pub fn is_contract_violation(&self) -> bool {
        matches!(
            self,
            Error::LengthMismatch { .. }
                | Error::EmptyInput(_)
                | Error::TooSmall { .. }
                | Error::Unlabeled(_)
                | Error::UnanchoredChain(_)
                | Error::InvalidRatio(_)
                | Error::UnknownCategory(_)
                | Error::UnknownFrenchTense { .. }
                | Error::Config(_)
        )
    }
}
