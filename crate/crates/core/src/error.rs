//! Error types for parsing, layout, and data loading.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}:{col}: unknown command \\{name}")]
    UnknownCommand { name: String, line: usize, col: usize },
    #[error("line {line}:{col}: unbalanced group")]
    UnbalancedGroup { line: usize, col: usize },
    #[error("line {line}:{col}: misplaced alignment tab")]
    MisplacedAlignTab { line: usize, col: usize },
    #[error("line {line}:{col}: \\{opened} closed by \\{closed}")]
    EnvironmentMismatch {
        opened: String,
        closed: String,
        line: usize,
        col: usize,
    },
    #[error("line {line}:{col}: invalid character `{ch}`")]
    InvalidCharacter { ch: char, line: usize, col: usize },
    #[error("line {line}:{col}: double script on the same atom")]
    DoubleScript { line: usize, col: usize },
    #[error("line {line}:{col}: missing argument for \\{name}")]
    MissingArgument { name: String, line: usize, col: usize },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::UnknownCommand { line, col, .. }
            | ParseError::UnbalancedGroup { line, col }
            | ParseError::MisplacedAlignTab { line, col }
            | ParseError::EnvironmentMismatch { line, col, .. }
            | ParseError::InvalidCharacter { line, col, .. }
            | ParseError::DoubleScript { line, col }
            | ParseError::MissingArgument { line, col, .. } => (*line, *col),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("multiline scripts only attach to operator atoms")]
    MultilineOnNonOp,
    #[error("unknown accent \\{0}")]
    UnknownAccent(String),
    #[error("unknown decoration {0}")]
    UnknownDecoration(String),
    #[error("alignment row has too many columns ({found} cells, {max} allowed)")]
    TooManyColumns { found: usize, max: usize },
    #[error("\\tag is not allowed in xxalignat")]
    TagInXXAlignat,
    #[error("\\split cannot be nested")]
    NestedSplit,
    #[error("format row declares {declared} columns but a row has {found}")]
    FormatArityMismatch { declared: usize, found: usize },
    #[error("\\hdotsfor span of {span} exceeds the {cols} available columns")]
    HdotsforSpanTooWide { span: usize, cols: usize },
    #[error("commutative diagram grid is empty or ragged")]
    RaggedGrid,
    #[error("{0} is allowed only in display math mode")]
    DisplayOnly(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("metrics line {line}: {reason}")]
    BadRecord { line: usize, reason: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegistryError {
    #[error("symbol \\{0} is not registered")]
    NotFound(String),
    #[error("`{letter}` is outside the domain of the {variant} alphabet")]
    OutOfDomain { variant: String, letter: char },
    #[error("registry line {line}: {reason}")]
    BadRecord { line: usize, reason: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("config line {line}: {reason}")]
    BadEntry { line: usize, reason: String },
}
