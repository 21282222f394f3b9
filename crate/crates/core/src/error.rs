use thiserror::Error;

/// Errors raised by the exact and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("target degree {target} is below the polynomial degree {degree}")]
    DegreeTooLow { target: u32, degree: u32 },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid point set: {0}")]
    InvalidPointSet(String),

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("operation requires planar points (2 affine or 3 projective coordinates), got dimension {0}")]
    NotPlanar(usize),

    #[error("basis elements are linearly dependent")]
    DependentBasis,

    #[error("basis element does not vanish on the point set")]
    NotInIdeal,

    #[error("products of the basis are linearly dependent (rank {rank} < {expected})")]
    NonIndependentProducts { rank: usize, expected: usize },

    #[error("common zero set is infinite: basis elements share a factor")]
    InfiniteIntersection,

    #[error("expected a one-dimensional solution space, found dimension {0}")]
    NullspaceDimension(usize),

    #[error("configuration violates the precondition: {0}")]
    Configuration(String),

    #[error("ideal of cubics has dimension {0}, expected 2")]
    CubicIdealDimension(usize),

    #[error("the ideal is not full at a point of the set")]
    NotFull,

    #[error("no element of the singular ideal lies outside the product span")]
    NoGap,

    #[error("gap element vanishes at a forced zero")]
    GapVanishesAtForcedZero,

    #[error("gap element has mixed signs on the forced zeros and no correcting combination exists")]
    MixedSigns,

    #[error("polynomial is not singular on the point set")]
    NotSingular,

    #[error("input polynomial takes negative value {value:e} at a sampled point")]
    NegativeInput { value: f64 },

    #[error("no positive real critical point")]
    NoCriticalPoint,

    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),

    #[error("`{name}` expects {expected} parameters, got {got}")]
    ParameterCount {
        name: String,
        expected: usize,
        got: usize,
    },

    #[error("argument out of range: {0}")]
    Domain(String),

    #[error("catalog corruption: {0}")]
    Catalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;
