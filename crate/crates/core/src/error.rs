use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("configuration error: expected {expected} pawns, found {found}")]
    Length { expected: usize, found: usize },
    #[error("configuration error: unknown color letter {0:?}")]
    UnknownColor(char),
    #[error("malformed feedback {0:?}, expected `<int>W <int>B`")]
    Feedback(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct TranscriptError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse model {input:?}: {message}")]
pub struct ModelParseError {
    pub input: String,
    pub message: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("feedback history is contradictory: {0}")]
    InconsistentHistory(String),
    #[error("internal invariant violated: hypothesis lattice exhausted against a consistent history")]
    LatticeExhausted,
    #[error("no guess left within the {0}-row limit")]
    RowLimit(usize),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("exhaustive run needs {required} games but the budget allows {budget}")]
pub struct BudgetExceeded {
    pub required: u64,
    pub budget: u64,
}
