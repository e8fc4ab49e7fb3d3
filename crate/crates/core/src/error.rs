use thiserror::Error;

/// Errors raised by the library.
///
/// Spec-level problems (bad parameters, malformed input) and numerical
/// diagnostics are kept apart so that front ends can map them to different
/// exit statuses; see [`Error::is_numerical`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quadrature did not converge: partial integral {partial_re:e}{partial_im:+e}i, error estimate {error_estimate:e}")]
    Quadrature {
        partial_re: f64,
        partial_im: f64,
        error_estimate: f64,
    },

    #[error("declared mass {declared} but atoms plus density integrate to {computed}")]
    MassMismatch { declared: f64, computed: f64 },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("degenerate dilation: c = 0 is not invertible")]
    DegenerateDilation,

    #[error("invalid Lévy triplet: {0}")]
    InvalidTriplet(String),

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("unknown catalog id `{0}`")]
    UnknownDistribution(String),

    #[error("transform role mismatch: expected {expected}, got {got}")]
    Role { expected: String, got: String },

    #[error("argument out of range: |z| = {modulus} exceeds the overflow guard {limit}")]
    OutOfRange { modulus: f64, limit: f64 },

    #[error("boundary limit did not settle at x = {x}: {detail}")]
    NonConvergence { x: f64, detail: String },

    #[error("shift refused: Gaussian component a = {a} is nonzero, so the shifted measure is not selfdecomposable for any m != 0")]
    GaussianComponent { a: f64 },

    #[error("not selfdecomposable: cofactor self-energy has Im K = {im_k:e} > 0 at z = {re}{im:+}i")]
    NotSelfdecomposable { re: f64, im: f64, im_k: f64 },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("Newton solve failed at z = {re}{im:+}i: residual {residual:e} after {iterations} iterations")]
    Solve {
        re: f64,
        im: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("malformed input: {0}")]
    Input(String),
}

impl Error {
    /// True for diagnostics produced by the numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. }
                | Error::MassMismatch { .. }
                | Error::NonConvergence { .. }
                | Error::NotSelfdecomposable { .. }
                | Error::InvariantViolation(_)
                | Error::Solve { .. }
                | Error::OutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
