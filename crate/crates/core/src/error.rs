use thiserror::Error;

/// Errors raised by the algebra, verifier and optimizer layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0} (supported: 1, 2, 4, 8, 16)")]
    UnsupportedDimension(usize),

    #[error("non-finite value in input")]
    NonFinite,

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("operator is not unitary (max residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("map is not an isometry (max residual {residual:e})")]
    NotIsometric { residual: f64 },

    #[error("invalid density operator: {0}")]
    InvalidDensity(&'static str),

    #[error("inconsistent factorization: {0}")]
    Factorization(String),

    #[error("lambda {0} outside [0, 1]")]
    LambdaOutOfRange(f64),

    #[error(
        "sqrt(lambda) U + sqrt(1 - lambda) A does not preserve norms; \
         U^dagger A' must be antisymmetric (residual {residual:e})"
    )]
    NonIsometricKMap { residual: f64 },

    #[error("machine extension mismatch: expected {expected}, machine declares {found}")]
    ExtensionMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error(
        "amplitudes a = {a}, b = {b} are not real: a* b - a b* = {term} is nonzero, \
         so the gate cannot preserve inner products between polar states"
    )]
    NonRealAmplitudes {
        a: num_complex::Complex64,
        b: num_complex::Complex64,
        term: num_complex::Complex64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
