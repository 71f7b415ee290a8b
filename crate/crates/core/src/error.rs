//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// A cell or schema entry violates the declared schema. Carries the
    /// 0-based row index when the violation is tied to a data row.
    #[error("schema violation in column '{column}'{}: {message}", fmt_row(*.row))]
    Schema {
        column: String,
        row: Option<usize>,
        message: String,
    },

    /// A token could not be parsed as the declared cell type.
    #[error("parse error at row {row}, column '{column}': {message}")]
    Parse {
        column: String,
        row: usize,
        message: String,
    },

    /// Structural CSV problems (header mismatch, ragged rows).
    #[error("format error: {0}")]
    Format(String),

    /// Invalid run or chain configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Argument outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A column carries too little information to order its latent scale.
    #[error("degenerate column '{0}': {1}")]
    Degenerate(String, String),

    /// Numerical failure (factorization breakdown, non-finite values).
    #[error("numeric failure: {0}")]
    Numeric(String),
}

fn fmt_row(row: Option<usize>) -> String {
    match row {
        Some(r) => format!(" at row {r}"),
        None => String::new(),
    }
}

impl Error {
    /// Process exit code for the CLI: 1 usage, 2 data, 3 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Io(_)
            | Error::Csv(_)
            | Error::Json(_)
            | Error::Schema { .. }
            | Error::Parse { .. }
            | Error::Format(_)
            | Error::Degenerate(..) => 2,
            Error::Domain(_) | Error::Numeric(_) => 3,
        }
    }
}
