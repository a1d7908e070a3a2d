use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid scale: {0}")]
    InvalidScale(String),
    #[error("sample budget must be positive")]
    EmptyBudget,
    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A condition on the radial profile failed at construction.
    #[error("profile condition {condition} violated: {detail}")]
    ProfileCondition { condition: &'static str, detail: String },
    #[error("root bracketing failed: {0}")]
    Bracketing(String),
    #[error("invalid cylinder word: {0}")]
    InvalidWord(String),
    #[error("cylinder geometry inconsistent: {0}")]
    InconsistentGeometry(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("decode error: {0}")]
    Decode(String),
}
