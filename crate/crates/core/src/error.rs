use thiserror::Error;

/// Everything that can go wrong in the pipeline.
///
/// Variants fall into three families which the CLI maps onto exit codes:
/// bad input, a violated mathematical property, and an exhausted resource.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("ring map has no image for variable `{0}`")]
    MissingImage(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("invalid field `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("quotient ring is infinite-dimensional (ideal is not zero-dimensional)")]
    InfiniteQuotient,
    #[error("graded piece of weight {weight} is infinite-dimensional")]
    InfiniteGradedPiece { weight: usize },
    #[error("unsupported variable weight {0} for a free variable")]
    UnsupportedWeight(u32),
    #[error("polynomial {0} is not in the ideal")]
    NotInIdeal(String),
    #[error("point is not on the scheme: generator {0} does not vanish")]
    PointNotOnScheme(String),
    #[error("point has {got} coordinates, ring has {expected} variables")]
    PointArity { expected: usize, got: usize },
    #[error("S-pair budget of {budget} exceeded")]
    ResourceLimit { budget: usize },
    #[error("weight cap {cap} reached without stabilization; homology by weight: {partial}")]
    WeightCapReached { cap: usize, partial: String },
    #[error(
        "certification window failed: finite difference at index {index} is {value}, expected 0 beyond degree {degree}"
    )]
    WindowFailure { index: usize, value: i64, degree: usize },
    #[error("series is not a polynomial: denominator (1-t)^{denominator_exponent} remains")]
    NotPolynomial { denominator_exponent: u32 },
    #[error("exact division failed: numerator is not divisible")]
    NotDivisible,
    #[error("non-integral intermediate value {0}")]
    NonIntegral(String),
    #[error("multiplicity mismatch: series gives {series}, length differences give {differences}")]
    MultiplicityMismatch { series: i64, differences: i64 },
    #[error("degree {degree} of the Fulton class exceeds the ambient dimension {bound}")]
    DegreeBound { degree: usize, bound: usize },
    #[error("lengths differ ({0} vs {1}); the schemes are not isomorphic")]
    LengthMismatch(usize, usize),
    #[error("no invertible change of variables found after {0} draws")]
    NonInvertible(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by the CLI exit-code contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ErrorClass {
    PropertyViolation,
    ResourceLimit,
    InputError,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::PropertyViolation => 1,
            ErrorClass::InputError => 2,
            ErrorClass::ResourceLimit => 3,
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::RingMismatch
            | Error::MissingImage(_)
            | Error::InvalidRing(_)
            | Error::Parse { .. }
            | Error::UnknownVariable { .. }
            | Error::Validation { .. }
            | Error::InfiniteQuotient
            | Error::InfiniteGradedPiece { .. }
            | Error::UnsupportedWeight(_)
            | Error::NotInIdeal(_)
            | Error::PointNotOnScheme(_)
            | Error::PointArity { .. }
            | Error::LengthMismatch(..)
            | Error::NonInvertible(_)
            | Error::Io(_) => ErrorClass::InputError,
            Error::ResourceLimit { .. } | Error::WeightCapReached { .. } => {
                ErrorClass::ResourceLimit
            }
            Error::WindowFailure { .. }
            | Error::NotPolynomial { .. }
            | Error::NotDivisible
            | Error::NonIntegral(_)
            | Error::MultiplicityMismatch { .. }
            | Error::DegreeBound { .. }
            | Error::Invariant(_) => ErrorClass::PropertyViolation,
        }
    }
}
