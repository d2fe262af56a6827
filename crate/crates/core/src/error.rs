use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("transition function is not total: no rule matches state `{state}` under profile ({profile})")]
    NotTotal { state: String, profile: String },

    #[error("costs too large: sums along a play could reach {bound}, above the supported maximum")]
    CostOverflow { bound: u128 },

    #[error("{what} limit exceeded: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("malformed lasso: {0}")]
    MalformedLasso(String),

    #[error("fragment inapplicable: {0}")]
    FragmentInapplicable(String),

    #[error("cost vector has {got} entries but the game has {expected} players")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, limit: u64, actual: u64) -> Self {
        Error::CapExceeded {
            what,
            limit,
            actual,
        }
    }
}
