use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("exponent overflow: real part {real_part:.3} exceeds {limit}")]
    Overflow { real_part: f64, limit: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("shift vector must be non-zero")]
    ZeroShift,

    #[error("block {block} is not in the span of the kernel basis (residual {residual:.3e})")]
    NotInSpan { block: usize, residual: f64 },

    #[error("relation `{relation}` violated (defect {defect:.3e})")]
    RelationViolated { relation: String, defect: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("invalid manifest: {0}")]
    Manifest(String),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}
