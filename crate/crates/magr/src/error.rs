use thiserror::Error;

/// Errors produced by the estimators, gap treatments and I/O layers.
#[derive(Debug, Error)]
pub enum MagrError {
    #[error("input error: {0}")]
    Input(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    /// One of the four correlation sums in the transfer entropy ratio is zero.
    #[error("transfer entropy undefined: correlation sum {which} is zero")]
    UndefinedTe { which: &'static str },

    #[error("gap placement infeasible after {attempts} attempts")]
    Feasibility { attempts: usize },

    #[error("generation error: {0}")]
    Generation(String),

    /// Rows and columns are 1-based to match the file as seen in an editor.
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MagrError>;
