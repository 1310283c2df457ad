use thiserror::Error;

/// Errors raised by fitting, boosting and the simulation runners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("every covariate column is constant")]
    AllColumnsConstant,
    #[error("need more than {needed} unique x-values, found {found}")]
    TooFewUniqueValues { needed: f64, found: usize },
    #[error("smoothing parameter search failed to reach df {target} (bracket [{low}, {high}])")]
    CalibrationFailed { target: f64, low: f64, high: f64 },
    #[error("no column admits a valid split")]
    NoValidSplit,
    #[error("response contains a single class")]
    SingleClassInput,
    #[error("hat operator was not tracked for this path")]
    HatNotTracked,
    #[error("iteration {m} exceeds path length {len}")]
    IterationOutOfRange { m: usize, len: usize },
    #[error("no iteration satisfies df + 2 < n")]
    NoAdmissibleIteration,
    #[error("unknown model id {0}")]
    UnknownModelId(String),
}

pub type Result<T> = std::result::Result<T, Error>;
