use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is rank deficient")]
    RankDeficient,

    #[error("center point lies outside the set")]
    CenterOutside,

    #[error("linear program could not be solved to a certified status")]
    NumericalFailure,

    #[error("dimension {dim} exceeds the supported cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("solution set is empty")]
    EmptySolutionSet,

    #[error("matrix is singular")]
    Singular,

    #[error("box does not intersect the image of the matrix")]
    EmptyIntersection,

    /// The scaling factor of the inner zonotope came out negative; the value is attached.
    #[error("no inner certificate exists (scale r = {0})")]
    NoCertificate(f64),

    #[error("mass matrix enclosure is singular")]
    SingularMass,

    #[error("effective torque box is empty")]
    EmptyEffectiveTorque,

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
