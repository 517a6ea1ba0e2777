use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,

    #[error("letter `{0}` is declared more than once")]
    DuplicateLetter(String),

    #[error("letter index {index} is outside an alphabet of {size} letters")]
    LetterOutOfRange { index: usize, size: usize },

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("expected {expected} rules, found {found}")]
    RuleCount { expected: usize, found: usize },

    #[error("result of {requested} letters exceeds the configured cap of {cap}")]
    ResourceLimit { requested: u128, cap: usize },

    #[error("morphism is not prolongable on `{0}`")]
    NotProlongable(String),

    #[error("morphism erases letter `{0}`; only non-erasing morphisms are supported here")]
    Erasing(String),

    #[error("morphism is not uniform: `{letter}` has image length {len}, expected {expected}")]
    NotUniform {
        letter: String,
        len: usize,
        expected: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}
