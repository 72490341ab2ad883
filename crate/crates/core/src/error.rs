use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A single validation failure, addressed by the dotted path of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl FieldError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for FieldError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("infinite third absolute moment: Student-t requires dof > 3 (got {0})")]
    InfiniteThirdMoment(f64),

    #[error("unknown coefficient family `{0}`")]
    UnknownFamily(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),

    #[error("frequency {0} outside [-1/2, 1/2]")]
    FrequencyOutOfRange(f64),

    /// Two frequencies share a modulus. Indices are 1-based.
    #[error("degenerate frequency tuple: |ν_{0}| = |ν_{1}|")]
    DegeneratePair(usize, usize),

    /// A zero frequency (or one at the Nyquist edge) in a strict tuple. Index is 1-based.
    #[error("degenerate frequency tuple: ν_{index} = {value} (must be non-zero and inside (-1/2, 1/2))")]
    DegenerateFrequency { index: usize, value: f64 },

    #[error("frequency sampler exhausted its retry budget of {0}")]
    RetryBudgetExhausted(usize),

    #[error("invalid experiment config: {}", join_fields(.0))]
    Config(Vec<FieldError>),
}

fn join_fields(errors: &[FieldError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
