use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("atom `{0}` is already registered")]
    DuplicateAtom(String),
    #[error("atom `{name}` has {got} values, expected {expected}")]
    TableLength { name: String, expected: usize, got: usize },
    #[error("time {t} is outside a finite trace of length {len}")]
    TimeOutOfRange { t: usize, len: usize },
    #[error("state {state} is not below the state count {count}")]
    BadState { state: usize, count: usize },
    #[error("a lasso cycle must be non-empty")]
    EmptyCycle,
    #[error("a finite trace must be non-empty")]
    EmptyTrace,
}
