use std::fmt;

/// Errors raised by the library.
///
/// Every variant maps to a stable machine-readable code via [`Error::code`],
/// which the command-line front end prints alongside the message.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("symbol {symbol} out of range for alphabet size {q}")]
    SymbolOutOfRange { symbol: usize, q: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("ell = 1 has no flow-conservation constraints")]
    NoFlowConstraints,
    #[error("tie between words {0} and {1}")]
    Tie(String, String),
    #[error("word {0} is constant")]
    ConstantWord(String),
    #[error("profile is not flow-conserving at node {0}")]
    NotFlowConserving(String),
    #[error("profile support is not strongly connected")]
    NotConnected,
    #[error("profile is identically zero")]
    ZeroProfile,
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("malformed information vector: {0}")]
    MalformedInfo(String),
    #[error("not a codeword: {0}")]
    NotACodeword(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("repository: {0}")]
    Repository(String),
    #[error("multiset mismatch between compared sequences")]
    MultisetMismatch,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "E_PARAMS",
            Error::SymbolOutOfRange { .. } => "E_SYMBOL",
            Error::LengthMismatch { .. } => "E_LENGTH",
            Error::NoFlowConstraints => "E_NO_FLOW",
            Error::Tie(..) => "E_TIE",
            Error::ConstantWord(_) => "E_CONSTANT_WORD",
            Error::NotFlowConserving(_) => "E_FLOW",
            Error::NotConnected => "E_CONNECTIVITY",
            Error::ZeroProfile => "E_ZERO",
            Error::NotAPermutation(_) => "E_PERM",
            Error::MalformedInfo(_) => "E_INFO",
            Error::NotACodeword(_) => "E_NOT_CODEWORD",
            Error::Parse(_) => "E_PARSE",
            Error::CapExceeded(_) => "E_CAP",
            Error::SearchExhausted(_) => "E_SEARCH",
            Error::Repository(_) => "E_REPOSITORY",
            Error::MultisetMismatch => "E_MULTISET",
            Error::Dimension(_) => "E_DIMENSION",
            Error::Internal(_) => "E_INTERNAL",
        }
    }

    pub(crate) fn parse(msg: impl fmt::Display) -> Self {
        Error::Parse(msg.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
