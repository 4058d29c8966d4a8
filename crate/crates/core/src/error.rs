use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} exceeds horizon {horizon}")]
    OutOfRange { value: u64, horizon: u64 },

    #[error("query {n} lies outside the materialized range [0, {horizon}]")]
    OutsideHorizon { n: u64, horizon: u64 },

    #[error("duplicate element {0}")]
    Duplicate(u64),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("modulus capacity insufficient: need {needed_bits} bits, have {available_bits}")]
    ModulusCapacity { needed_bits: u64, available_bits: u64 },

    #[error("transform length {0} exceeds the supported maximum")]
    TransformTooLong(usize),

    #[error("enumeration budget exceeded: needs about {needed} tuple visits, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
