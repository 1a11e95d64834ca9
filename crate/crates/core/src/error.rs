use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QgrdError {
    #[error("label {label} does not belong to family {family}")]
    ForeignLabel { label: String, family: String },

    #[error("fusion is not available for {0}")]
    FusionUnsupported(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inadmissible triple ({k}, {l}, {n})")]
    Inadmissible { k: usize, l: usize, n: usize },

    #[error("{0} is not a constituent of the tensor product")]
    NotConstituent(String),

    #[error("parity failure: {0}")]
    Parity(String),

    #[error("generating set is not closed under conjugation")]
    GeneratorsNotSelfConjugate,

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("radius {radius} is too small, at least {needed} required")]
    InsufficientRadius { radius: u32, needed: u32 },

    #[error("classification not polynomial")]
    NotPolynomial,

    #[error("domination impossible: {0}")]
    DominationImpossible(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("kernel is not positive")]
    NonPositiveKernel,

    #[error("kernel support is not inside sphere {0}")]
    SupportOutsideSphere(usize),

    #[error("truncation margin violated: {0}")]
    Margin(String),

    #[error("multiplicity {0} exceeds one")]
    Multiplicity(u64),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("malformed data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, QgrdError>;
