use thiserror::Error;

/// Errors raised anywhere in the correlation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The adaptive quadrature ran out of subdivisions. Usually means `t̃` is
    /// too large for the configured tolerances.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {error:e})"
    )]
    ConvergenceFailure {
        subdivisions: usize,
        estimate: f64,
        error: f64,
    },

    #[error("density matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("spectrum has eigenvalue {eigenvalue:e} below the clamping threshold")]
    InvalidSpectrum { eigenvalue: f64 },

    #[error("basis optimizer did not converge within {iterations} iterations")]
    OptimizerFailure { iterations: usize },

    /// Central differences at `h` and `h/2` disagree beyond tolerance.
    #[error("unstable discord derivative: {coarse} (h) vs {fine} (h/2)")]
    UnstableDerivative { coarse: f64, fine: f64 },

    #[error("at a_tilde = {a_tilde}, t_tilde = {t_tilde}: {source}")]
    AtPoint {
        a_tilde: f64,
        t_tilde: f64,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, a_tilde: f64, t_tilde: f64) -> Self {
        match self {
            e @ Error::AtPoint { .. } => e,
            e => Error::AtPoint {
                a_tilde,
                t_tilde,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
