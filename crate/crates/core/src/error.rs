use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("game needs at least 3 players, got {0}")]
    TooFewPlayers(usize),

    #[error("{n} players exceeds the packed word limit of {max}")]
    TooManyPlayers { n: usize, max: usize },

    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid symbol {0:?}")]
    InvalidSymbol(char),

    #[error("question {0} breaks the promise (odd number of ones)")]
    IllegitimateQuestion(String),

    #[error("answer {0} contains ⊥, parity undefined")]
    UndefinedParity(String),

    #[error("player index {index} out of range for {n} players")]
    PlayerOutOfRange { index: usize, n: usize },

    #[error("{what}: n = {n} exceeds limit {limit}")]
    LimitExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("state norm {0} is not 1")]
    Unnormalized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("score mismatch: Re(s) = {re} but wins - losses = {diff}")]
    ScoreMismatch { re: i64, diff: i64 },
}
