use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("no such pair: {0}")]
    NoSuchPair(String),
    #[error("not a preorder: {0}")]
    NotPreorder(String),
    #[error("missing structure: {0}")]
    MissingStructure(String),
    #[error("no weak pullback for cospan {0}")]
    NoWeakPullback(String),
    #[error("empty seed set `{0}`")]
    EmptySeed(String),
    #[error("operation needs a tabulated doctrine")]
    NotTabulated,
    #[error("ill-defined quotient: {0}")]
    IllDefinedQuotient(String),
    #[error("fiber too large: {needed} candidates exceed budget {budget}")]
    FiberTooLarge { budget: usize, needed: usize },
    #[error("not a subdoctrine: {0}")]
    NotASubdoctrine(String),
    #[error("not regular: {0}")]
    NotRegular(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("sort error: {0}")]
    Sort(String),
    #[error("unsupported function symbol `{0}`")]
    UnsupportedFunctionSymbol(String),
    #[error("unsupported theory: {0}")]
    UnsupportedTheory(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
