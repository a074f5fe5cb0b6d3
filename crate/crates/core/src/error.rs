use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(
        "enumeration of {kind} partitions of size {n} exceeds the configured ceiling {ceiling}"
    )]
    SizeExceeded {
        kind: &'static str,
        n: usize,
        ceiling: usize,
    },
    #[error("pair partitions require an even ground set, got n = {0}")]
    OddPairSize(usize),
    #[error("ground-set size must be at least 1")]
    EmptyGroundSet,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition is not a pair partition")]
    NotPairPartition,
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("parameter `{name}` out of range: {reason}")]
    ParameterOutOfRange { name: &'static str, reason: String },
    #[error("sequence too short: need at least {needed} entries, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("distribution `{0}` has no CDF")]
    MissingCdf(String),
    #[error("distribution `{0}` has no atom list")]
    MissingAtoms(String),
    #[error("distribution `{0}` has no Lipschitz bound")]
    MissingLipschitz(String),
    #[error("tolerance {requested} is below the evaluation error floor {floor}")]
    ToleranceTooSmall { requested: f64, floor: f64 },
    #[error(
        "negative radicand {radicand} in the {theorem} bound; the input law is not \
         {order}-divisible (run the kurtosis audit to find the admissible divisibility order)"
    )]
    NegativeRadicand {
        theorem: &'static str,
        radicand: f64,
        order: String,
    },
    #[error("zero variance: central second moment is {0}")]
    ZeroVariance(f64),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
}
