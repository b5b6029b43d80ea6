use thiserror::Error;

/// Everything that can go wrong inside the workbench.
///
/// Variant names double as the stable error identifiers printed by the CLI,
/// see [`Error::name`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible over GF({p})")]
    NotIrreducible { p: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element is not a square")]
    NotASquare,
    #[error("every element of a characteristic-2 field is a square")]
    CharTwo,
    #[error("field of size {size} exceeds the configured bound {bound}")]
    FieldTooLarge { size: u64, bound: u64 },
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("search bound exceeded: {0}")]
    SearchBoundExceeded(String),
    #[error("GF({sub_p}^{sub_h}) does not embed in GF({sup_p}^{sup_h})")]
    NotASubfield { sub_p: u32, sub_h: u32, sup_p: u32, sup_h: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("code is not self-orthogonal")]
    NotSelfOrthogonal,
    #[error("unsupported instance: {0}")]
    UnsupportedInstance(String),
    #[error("evaluation points are not pairwise distinct (positions {0} and {1})")]
    DuplicateAlpha(usize, usize),
    #[error("column multiplier v[{0}] is zero")]
    ZeroV(usize),
    #[error("twist shape does not match the requested construction")]
    ShapeMismatch,
    #[error("generator matrix is rank deficient")]
    RankDeficient,
    #[error("the last twist coefficient must be nonzero")]
    ZeroLeadingTwist,
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error("no theorem case covers n={n}, k={k}")]
    CaseNotCovered { n: usize, k: usize },
    #[error("bad subset: {0}")]
    BadSubset(String),
    #[error("parameter constraint violated: {0}")]
    ParamConstraintViolation(String),
    #[error("polynomial is not squarefree")]
    PolynomialNotSquarefree,
    #[error("polynomial roots are not distinct")]
    RootsNotDistinct,
    #[error("splitting field too large: {0}")]
    SplittingFieldTooLarge(String),
    #[error("claim violated: {0}")]
    ClaimViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable identifier of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::NotIrreducible { .. } => "NotIrreducible",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch => "FieldMismatch",
            Error::NotASquare => "NotASquare",
            Error::CharTwo => "CharTwo",
            Error::FieldTooLarge { .. } => "FieldTooLarge",
            Error::NotSquarefree => "NotSquarefree",
            Error::SearchBoundExceeded(_) => "SearchBoundExceeded",
            Error::NotASubfield { .. } => "NotASubfield",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::BoundExceeded(_) => "BoundExceeded",
            Error::NotSelfOrthogonal => "NotSelfOrthogonal",
            Error::UnsupportedInstance(_) => "UnsupportedInstance",
            Error::DuplicateAlpha(..) => "DuplicateAlpha",
            Error::ZeroV(_) => "ZeroV",
            Error::ShapeMismatch => "ShapeMismatch",
            Error::RankDeficient => "RankDeficient",
            Error::ZeroLeadingTwist => "ZeroLeadingTwist",
            Error::InvalidDimensions(_) => "InvalidDimensions",
            Error::CaseNotCovered { .. } => "CaseNotCovered",
            Error::BadSubset(_) => "BadSubset",
            Error::ParamConstraintViolation(_) => "ParamConstraintViolation",
            Error::PolynomialNotSquarefree => "PolynomialNotSquarefree",
            Error::RootsNotDistinct => "RootsNotDistinct",
            Error::SplittingFieldTooLarge(_) => "SplittingFieldTooLarge",
            Error::ClaimViolated(_) => "ClaimViolated",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
