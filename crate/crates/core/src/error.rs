use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state is not normalized (trace {trace})")]
    NotNormalized { trace: f64 },

    #[error("cannot renormalize a state with trace {trace:.3e}")]
    ZeroTrace { trace: f64 },

    #[error("Kraus set is not complete (max deviation from identity {deviation:.3e})")]
    IncompleteChannel { deviation: f64 },

    #[error("Choi state violates its marginal condition (max deviation {deviation:.3e})")]
    InvalidChoi { deviation: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear program is infeasible: {0}")]
    Infeasible(String),

    #[error("linear program failed numerically: {0}")]
    NumericalFailure(String),

    #[error("no sign change of the predicate on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn dims(
        context: &'static str,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
