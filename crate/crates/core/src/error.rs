use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cannot mix real and complex matrices")]
    ScalarKindMismatch,

    #[error("empty input")]
    EmptyInput,

    #[error("matrix is not self-adjoint (relative deviation {deviation:e})")]
    NotSelfAdjoint { deviation: f64 },

    #[error("input matrix {index} is not positive definite")]
    SingularInput { index: usize },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("sum of inverses is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("point {re} + {im}i lies on the support; the transform is undefined there")]
    OnSupport { re: f64, im: f64 },

    #[error("pole of the S-transform at {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("S-transform branch is ambiguous at w = {re} + {im}i: {detail}")]
    BranchAmbiguity { re: f64, im: f64, detail: String },

    #[error(
        "fixed-point iteration did not converge after {iterations} steps (residual {residual:e})"
    )]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("crossover bound is vacuous: harmonic limit {harm} >= arithmetic limit {arith}")]
    VacuousBound { harm: f64, arith: f64 },

    #[error("invalid population spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("grid point {index}: {source}")]
    GridPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
