use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("tied latent positions")]
    TiedLatentPositions,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("sequence shorter than number of events (N = {frames}, M = {events})")]
    SequenceTooShort { frames: usize, events: usize },
    #[error("latent assignment violates the coverage constraint: {0}")]
    ConstraintViolation(String),
    #[error("instance too large for brute force")]
    BruteForceTooLarge,
    #[error("candidate set exhausted after {picked} of {events} picks")]
    CandidatesExhausted { picked: usize, events: usize },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("invalid label {label}: {reason}")]
    InvalidLabel { label: i64, reason: &'static str },
    #[error("class {0} has no samples")]
    EmptyClass(i64),
    #[error("metric undefined: {0}")]
    UndefinedMetric(&'static str),
    #[error("score tables disagree: {0}")]
    TableMismatch(String),
    #[error("non-finite score")]
    NonFinite,
    #[error("empty grid")]
    EmptyGrid,
    #[error("invalid folds: {0}")]
    InvalidFolds(String),
}

impl Error {
    /// True for errors caused by an infeasible or oversized numeric problem
    /// rather than malformed input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::SequenceTooShort { .. }
                | Error::BruteForceTooLarge
                | Error::CandidatesExhausted { .. }
                | Error::Infeasible(_)
                | Error::NonFinite
                | Error::UndefinedMetric(_)
        )
    }
}
