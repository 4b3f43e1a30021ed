use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |a - a^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid state: {reason} ({value:e})")]
    InvalidState { reason: &'static str, value: f64 },

    #[error("parameter {name} = {value} is outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("Kraus operators violate completeness (residual {residual:e})")]
    Completeness { residual: f64 },

    #[error("channel has no Kraus operators")]
    EmptyChannel,

    #[error("invalid POVM: {reason} ({value:e})")]
    InvalidPovm { reason: &'static str, value: f64 },

    #[error("priors must be nonnegative and sum to 1 (sum {sum})")]
    InvalidPriors { sum: f64 },

    #[error("sampled Kraus branch {index} has vanishing norm")]
    ZeroNormBranch { index: usize },

    #[error("{0}")]
    Unsupported(&'static str),
}
