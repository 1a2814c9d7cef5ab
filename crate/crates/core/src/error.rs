use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MiniwError {
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),
    #[error("malformed algebra data: {0}")]
    BadData(String),
    #[error("singular neutral gram matrix for {0}")]
    SingularGram(String),
    #[error("element is not in the centralizer of f: {0}")]
    NotInCentralizer(String),
    #[error("weights have different levels: {0} vs {1}")]
    LevelMismatch(String, String),
    #[error("result leaves the truncation window: {0}")]
    WindowOverflow(String),
    #[error("not stabilized: {0}")]
    NotStabilized(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("nilpotency violated: {0}")]
    NilpotencyViolation(String),
    #[error("critical level k = -h^v = {0}")]
    CriticalLevel(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },
}

impl MiniwError {
    /// Stable kebab-case name used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            MiniwError::UnsupportedAlgebra(_) => "unsupported-algebra",
            MiniwError::BadData(_) => "bad-data",
            MiniwError::SingularGram(_) => "singular-gram",
            MiniwError::NotInCentralizer(_) => "element-not-in-centralizer",
            MiniwError::LevelMismatch(..) => "level-mismatch",
            MiniwError::WindowOverflow(_) => "window-overflow",
            MiniwError::NotStabilized(_) => "not-stabilized",
            MiniwError::WindowTooSmall(_) => "window-too-small",
            MiniwError::NilpotencyViolation(_) => "nilpotency-violation",
            MiniwError::CriticalLevel(_) => "critical-level",
            MiniwError::Parse(_) => "parse-error",
            MiniwError::InvalidConfig { .. } => "invalid-config",
        }
    }

    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            MiniwError::Parse(_) | MiniwError::InvalidConfig { .. } | MiniwError::UnsupportedAlgebra(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, MiniwError>;
