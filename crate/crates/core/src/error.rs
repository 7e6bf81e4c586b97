use thiserror::Error;

/// Every failure the library reports. [`Error::code`] gives the stable
/// machine-readable name used in reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("port or interaction outside the declared universe: {0}")]
    UniverseMismatch(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("duplicate name: {0}")]
    DuplicateName(String),

    #[error("component type `{0}` declares no ports")]
    NoPorts(String),

    #[error("instance count of `{0}` must be at least 1")]
    ZeroCount(String),

    #[error("unknown port `{0}`")]
    UnknownPort(String),

    #[error("invalid component behaviour for `{component}`: {reason}")]
    InvalidLts { component: String, reason: String },

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("implementation loop must not be empty")]
    EmptyLoop,

    #[error("configuration must contain at least one interaction")]
    EmptyConfiguration,

    #[error("invalid interaction {0}: uses more than one port of a component instance")]
    InvalidInteraction(String),

    #[error("symbol {0} is not in the automaton alphabet")]
    UnknownSymbol(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("implementation is not partially trustworthy")]
    NotPartiallyTrustworthy,

    #[error("big operator `{0}` over an empty index set has no unit")]
    EmptyBigOperator(&'static str),

    #[error("pipes-filters needs at least two pipes, got {0}")]
    InsufficientPipes(u32),

    #[error("star needs at least two nodes, got {0}")]
    InsufficientNodes(u32),

    #[error("{style} takes {expected} instance count(s), got {got}")]
    Arity {
        style: &'static str,
        expected: usize,
        got: usize,
    },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::UniverseMismatch(_) => "UNIVERSE_MISMATCH",
            Error::ResourceLimit(_) => "RESOURCE_LIMIT",
            Error::DuplicateName(_) => "DUPLICATE_NAME",
            Error::NoPorts(_) => "NO_PORTS",
            Error::ZeroCount(_) => "ZERO_COUNT",
            Error::UnknownPort(_) => "UNKNOWN_PORT",
            Error::InvalidLts { .. } => "INVALID_LTS",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::EmptyLoop => "EMPTY_LOOP",
            Error::EmptyConfiguration => "EMPTY_CONFIGURATION",
            Error::InvalidInteraction(_) => "INVALID_INTERACTION",
            Error::UnknownSymbol(_) => "UNKNOWN_SYMBOL",
            Error::InvalidAutomaton(_) => "INVALID_AUTOMATON",
            Error::NotPartiallyTrustworthy => "NOT_PARTIALLY_TRUSTWORTHY",
            Error::EmptyBigOperator(_) => "EMPTY_BIG_OPERATOR",
            Error::InsufficientPipes(_) => "INSUFFICIENT_PIPES",
            Error::InsufficientNodes(_) => "INSUFFICIENT_NODES",
            Error::Arity { .. } => "ARITY_MISMATCH",
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
