use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("operand alphabets differ")]
    AlphabetMismatch,

    #[error("{what} is {actual}, above the cap of {cap}; raise it with {flag}")]
    Guard {
        what: &'static str,
        actual: u128,
        cap: u128,
        flag: &'static str,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("free variable `{0}`")]
    FreeVariable(String),

    #[error("formula uses moduli {found:?} where {expected} was required")]
    ModulusMismatch { expected: u32, found: Vec<u32> },

    #[error("formula still contains a length predicate D")]
    ResidualLength,

    #[error("letter `{0}` is not an enriched letter")]
    NotEnriched(String),

    #[error("formula uses {0} variable names; the two-variable count needs at most 2")]
    TooManyVariables(usize),

    #[error("element {0} is not idempotent")]
    NotIdempotent(u32),

    #[error("the considered subset is not closed under multiplication")]
    NotClosed,

    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(u32, u32, u32),

    #[error("unknown fragment `{0}`")]
    UnknownFragment(String),

    #[error("fragment `{0}` needs an equation file (--equations)")]
    MissingEquations(String),

    #[error("{0} does not divide {1}")]
    NotDivisible(u32, u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            position,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }
}
