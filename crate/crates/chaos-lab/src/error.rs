use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(u32, u32),
    #[error("negative distance: {0}")]
    NegativeDistance(String),
    #[error("negative tolerance: {0}")]
    NegativeTolerance(String),
    #[error("factor mismatch: {0}")]
    FactorMismatch(String),
    #[error("group word signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("budget too large: {0}")]
    BudgetTooLarge(String),
    /// Reserved for point kinds without a structural equality; every kind
    /// shipped here has one.
    #[error("exact equality unsupported for this point kind")]
    ExactEqualityUnsupported,
    #[error("point outside the linked-twist domain R: {0}")]
    OutsideDomain(String),
    #[error("pillow point outside the disk p(R): {0}")]
    OutsideDisk(String),
    #[error("missing fixed point for factor {0}")]
    MissingFixedPoint(usize),
    #[error("no periodic/closed-orbit oracle for system `{0}`")]
    NoOracle(String),
    #[error("constructor precondition violated: {0}")]
    ConstructorPrecondition(String),
    #[error("config error: {0}")]
    ConfigParse(String),
    #[error("invalid rational: {0}")]
    ParseRat(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point does not belong to system `{system}`: {detail}")]
    InvalidPoint { system: String, detail: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
