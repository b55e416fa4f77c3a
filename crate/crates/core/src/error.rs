use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("election has no candidates")]
    EmptyCandidates,
    #[error("ballot kind does not fit the rule or the other ballots")]
    BallotKindMismatch,
    #[error("invalid preference order: {0}")]
    InvalidOrder(String),
    #[error("approval vector has {found} entries, expected {expected}")]
    InvalidApproval { expected: usize, found: usize },
    #[error("invalid scoring protocol: {0}")]
    InvalidProtocol(String),
    #[error("candidate {0} does not exist")]
    InvalidCandidate(usize),
    #[error("invalid voter block: {0}")]
    InvalidVoter(String),
    #[error("rule {0} is not score based")]
    NotScoreBased(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("solver does not apply: {0}")]
    Unsupported(String),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("variable {0} has no finite bound")]
    Unbounded(String),
    /// Input problems not tied to a line.
    #[error("{0}")]
    Input(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
